//! Seeded random instance generators shared by the unit, integration and
//! acceptance test suites.
//!
//! Everything here is deterministic in the seed, so failures reproduce
//! exactly.  The generators construct inputs in their validated forms (for
//! example, dictionaries whose items never collide on a coordinate, or
//! symmetric matrices guaranteed to admit a positive-value decomposition).

use std::collections::HashSet;

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dictionary::{hermitianize, DataItem, Dictionary, HermitianDictionary};
use crate::sparse::{SparseMatrix, Triplet};
use crate::synthesis::BooleanFunctionTable;

/// Deterministic generator for a test seed.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Nonzero complex value with magnitude bounded away from zero, so that
/// tolerance checks are meaningful.
pub fn random_value(rng: &mut ChaCha8Rng) -> Complex64 {
    loop {
        let v = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        if v.norm() >= 0.1 {
            return v;
        }
    }
}

/// Random dictionary on `n` system qubits with up to `max_items` items.
///
/// Each item receives a nonempty injective partial column-to-row map; a
/// shared used-coordinate set keeps distinct items from covering the same
/// (column, row) cell, so the dictionary reproduces its matrix exactly.
pub fn random_dictionary(rng: &mut ChaCha8Rng, n: u32, max_items: usize) -> Dictionary {
    let dim = 1usize << n;
    let item_count = rng.gen_range(1..=max_items);
    let mut used: HashSet<(usize, usize)> = HashSet::new();
    let mut items = Vec::new();
    for _ in 0..item_count {
        let support = rng.gen_range(1..=dim);
        let mut cols: Vec<usize> = (0..dim).collect();
        let mut rows: Vec<usize> = (0..dim).collect();
        for k in 0..dim {
            let c = rng.gen_range(k..dim);
            cols.swap(k, c);
            let r = rng.gen_range(k..dim);
            rows.swap(k, r);
        }
        let pairs: Vec<(usize, usize)> = cols
            .into_iter()
            .zip(rows)
            .filter(|&(c, r)| used.insert((c, r)))
            .take(support)
            .collect();
        if pairs.is_empty() {
            continue;
        }
        items.push(DataItem::new(random_value(rng), pairs).expect("injective by construction"));
    }
    if items.is_empty() {
        let value = random_value(rng);
        items.push(DataItem::new(value, vec![(0, 0)]).unwrap());
    }
    Dictionary::new(n, items).expect("coordinates are disjoint by construction")
}

/// Random dictionary whose every item is a full-coverage XOR shift
/// `column -> column ^ mask` with distinct masks, i.e. exactly the shape a
/// sum-of-permutations export accepts.
pub fn random_xor_dictionary(rng: &mut ChaCha8Rng, n: u32, terms: usize) -> Dictionary {
    let dim = 1usize << n;
    assert!(terms <= dim, "only {dim} distinct masks exist on {n} qubits");
    let mut masks: Vec<usize> = (0..dim).collect();
    for k in 0..terms {
        let pick = rng.gen_range(k..dim);
        masks.swap(k, pick);
    }
    let items = masks[..terms]
        .iter()
        .map(|&mask| {
            let pairs = (0..dim).map(|c| (c, c ^ mask)).collect();
            DataItem::new(random_value(rng), pairs).unwrap()
        })
        .collect();
    Dictionary::new(n, items).expect("distinct masks never collide")
}

/// Random single-item permutation dictionary that is *not* an XOR shift:
/// the column-to-row map is a uniformly random permutation, resampled until
/// `row ^ column` is non-constant.  Used to exercise rejection paths.
pub fn random_non_xor_permutation_dictionary(rng: &mut ChaCha8Rng, n: u32) -> Dictionary {
    let dim = 1usize << n;
    assert!(n >= 1, "a 1x1 permutation is always an XOR shift");
    loop {
        let mut rows: Vec<usize> = (0..dim).collect();
        for k in 0..dim {
            let pick = rng.gen_range(k..dim);
            rows.swap(k, pick);
        }
        let constant_mask = rows.iter().enumerate().all(|(c, &r)| r ^ c == rows[0]);
        if constant_mask {
            continue;
        }
        let pairs = rows.iter().copied().enumerate().collect();
        let item = DataItem::new(random_value(rng), pairs).unwrap();
        return Dictionary::new(n, vec![item]).unwrap();
    }
}

/// Random symmetric matrix with strictly positive entries drawn from a
/// two-value palette (one value for diagonal cells, another for off-diagonal
/// pairs), together with its positive-value decomposition.
///
/// With two values the decomposition needs at most `1 + max_degree` items,
/// which always fits the `2^n` item capacity, so this generator never has to
/// reject an instance.
pub fn random_symmetric_instance(
    rng: &mut ChaCha8Rng,
    n: u32,
) -> (SparseMatrix, HermitianDictionary) {
    let dim = 1usize << n;
    let diag_value: f64 = rng.gen_range(0.2..1.5);
    let edge_value = loop {
        let v: f64 = rng.gen_range(0.2..1.5);
        if (v - diag_value).abs() > 1e-3 {
            break v;
        }
    };
    loop {
        let mut triplets = Vec::new();
        for j in 0..dim {
            if rng.gen_bool(0.6) {
                triplets.push(Triplet { row: j, col: j, value: Complex64::new(diag_value, 0.0) });
            }
        }
        for c in 0..dim {
            for r in c + 1..dim {
                if rng.gen_bool(0.3) {
                    let value = Complex64::new(edge_value, 0.0);
                    triplets.push(Triplet { row: r, col: c, value });
                    triplets.push(Triplet { row: c, col: r, value });
                }
            }
        }
        if triplets.is_empty() {
            continue;
        }
        let a = SparseMatrix::new(n, triplets).unwrap();
        let hd = hermitianize(&a).expect("two-value palette always fits the item capacity");
        return (a, hd);
    }
}

/// Random lookup table with the requested index/word widths and entry count.
/// Keys are distinct; words are nonzero so every entry acts on the output.
pub fn random_table(
    rng: &mut ChaCha8Rng,
    index_bits: u32,
    word_bits: u32,
    entries: usize,
) -> BooleanFunctionTable {
    let key_space = 1u64 << index_bits;
    let word_space = 1u64 << word_bits;
    assert!(word_bits >= 1, "zero-width words cannot be nonzero");
    assert!(entries as u64 <= key_space, "not enough distinct keys");
    let mut keys: HashSet<u64> = HashSet::new();
    let mut nonzeros = Vec::new();
    while nonzeros.len() < entries {
        let key = rng.gen_range(0..key_space);
        if !keys.insert(key) {
            continue;
        }
        nonzeros.push((key, rng.gen_range(1..word_space)));
    }
    BooleanFunctionTable::new(index_bits, word_bits, nonzeros).unwrap()
}

/// Dense random complex matrix on `n` qubits (every entry nonzero).
pub fn random_dense_matrix(rng: &mut ChaCha8Rng, n: u32) -> SparseMatrix {
    let dim = 1usize << n;
    let mut triplets = Vec::with_capacity(dim * dim);
    for row in 0..dim {
        for col in 0..dim {
            triplets.push(Triplet { row, col, value: random_value(rng) });
        }
    }
    SparseMatrix::new(n, triplets).unwrap()
}
