//! Automatic dictionary construction from a sparse matrix.
//!
//! [`build_dictionary`] groups the nonzeros by value and splits each value
//! class into as few items as possible.  Within a class the coordinates form
//! a bipartite graph (rows on one side, columns on the other), and a valid
//! item is exactly a matching in that graph — no two coordinates of an item
//! may share a row or a column.  Partitioning the edges into the minimum
//! number of matchings is bipartite edge colouring, and by Kőnig's
//! edge-colouring theorem the optimum equals the maximum vertex degree Δ.
//! The default strategy implements the classical alternating-path colouring,
//! which achieves exactly Δ; a cheaper greedy strategy (repeatedly peeling
//! maximal matchings) is provided for comparison but may exceed Δ.
//!
//! [`hermitianize`] covers the symmetric route: for a symmetric matrix with
//! strictly positive entries it assigns, per value class and per column, the
//! sorted rows round-robin to item slots, producing max-column-degree many
//! items per class while keeping the fixed-column rows of distinct items
//! disjoint.

use super::{DataItem, Dictionary, DictionaryError, HermitianDictionary, Result};
use crate::numerics::Complex64;
use crate::sparse::SparseMatrix;
use std::collections::BTreeMap;

/// How a value class is split into items.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MatchingStrategy {
    /// Exact bipartite edge colouring: item count per class equals the
    /// maximum number of times any single row or column is used in the
    /// class.  This is the default.
    #[default]
    EdgeColoring,
    /// Repeatedly peel maximal matchings in coordinate order.  Fast and
    /// simple, but the item count may exceed the optimum.
    GreedyMatching,
}

/// Builds a minimal dictionary for `a`, grouping values within `value_tol`.
///
/// With `value_tol == 0` values are grouped by exact equality.  Items are
/// ordered by descending `|value|`, ties broken by the smallest `(column,
/// row)` coordinate of the item.
pub fn build_dictionary(a: &SparseMatrix, value_tol: f64) -> Result<Dictionary> {
    build_dictionary_with(a, value_tol, MatchingStrategy::EdgeColoring)
}

/// [`build_dictionary`] with an explicit class-splitting strategy.
pub fn build_dictionary_with(
    a: &SparseMatrix,
    value_tol: f64,
    strategy: MatchingStrategy,
) -> Result<Dictionary> {
    if a.nnz() == 0 {
        return Err(DictionaryError::EmptyMatrix);
    }
    let classes = group_by_value(a, value_tol);
    let mut items = Vec::new();
    for class in &classes {
        let colors = match strategy {
            MatchingStrategy::EdgeColoring => edge_color_bipartite(&class.coords),
            MatchingStrategy::GreedyMatching => greedy_matchings(&class.coords),
        };
        let groups = colors.iter().copied().max().map_or(0, |m| m + 1);
        let mut maps: Vec<Vec<(usize, usize)>> = vec![Vec::new(); groups];
        for (edge, &(row, col)) in class.coords.iter().enumerate() {
            maps[colors[edge]].push((col, row));
        }
        for map in maps {
            items.push(DataItem::new(class.value, map)?);
        }
    }
    sort_items(&mut items);
    Dictionary::new(a.n(), items)
}

/// Splits a symmetric, strictly-positive matrix into a
/// [`HermitianDictionary`].
///
/// Complex or non-positive entries and asymmetric structure are rejected.
/// Per value class the item count is the largest number of class entries in
/// any single column, so a tridiagonal matrix with constant diagonal and
/// constant off-diagonal yields three items.
pub fn hermitianize(a: &SparseMatrix) -> Result<HermitianDictionary> {
    if a.nnz() == 0 {
        return Err(DictionaryError::EmptyMatrix);
    }
    for t in a.triplets() {
        if t.value.im != 0.0 || t.value.re <= 0.0 {
            return Err(DictionaryError::NonPositiveEntry { row: t.row, col: t.col });
        }
    }
    for t in a.triplets() {
        if a.value_at(t.col, t.row) != Some(t.value) {
            return Err(DictionaryError::NotSymmetric { row: t.row, col: t.col });
        }
    }

    let classes = group_by_value(a, 0.0);
    let mut items = Vec::new();
    for class in &classes {
        // Rows of each column, ascending; slot k of the class takes the k-th
        // row of every column, so distinct items never share a row within a
        // fixed column.
        let mut by_col: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for &(row, col) in &class.coords {
            by_col.entry(col).or_default().push(row);
        }
        let slots = by_col.values().map(Vec::len).max().unwrap_or(0);
        let mut maps: Vec<Vec<(usize, usize)>> = vec![Vec::new(); slots];
        for (&col, rows) in &by_col {
            for (k, &row) in rows.iter().enumerate() {
                maps[k].push((col, row));
            }
        }
        for map in maps {
            items.push(DataItem::new(class.value, map)?);
        }
    }
    sort_items(&mut items);
    if items.len() > a.dim() {
        return Err(DictionaryError::CapacityExceeded {
            required: items.len(),
            available: a.dim(),
        });
    }
    HermitianDictionary::new(a.n(), items)
}

struct ValueClass {
    value: Complex64,
    /// `(row, col)` coordinates carrying this value, in `(row, col)` order.
    coords: Vec<(usize, usize)>,
}

/// Groups nonzeros into value classes.
///
/// For `value_tol == 0` the key is exact bit equality (with `-0.0`
/// normalised to `0.0`).  For positive tolerances the distinct values are
/// sorted lexicographically by `(re, im)` and swept greedily: a value joins
/// the current class while it stays within `value_tol` of the class
/// representative (the first value of the class), otherwise it starts a new
/// class.  Both paths are deterministic.
fn group_by_value(a: &SparseMatrix, value_tol: f64) -> Vec<ValueClass> {
    let canon = |x: f64| if x == 0.0 { 0.0f64 } else { x };
    let bit_key = |v: Complex64| (canon(v.re).to_bits(), canon(v.im).to_bits());

    let mut classes: Vec<ValueClass> = Vec::new();
    if value_tol == 0.0 {
        let mut index: BTreeMap<(u64, u64), usize> = BTreeMap::new();
        for t in a.triplets() {
            let key = bit_key(t.value);
            let slot = *index.entry(key).or_insert_with(|| {
                classes.push(ValueClass { value: t.value, coords: Vec::new() });
                classes.len() - 1
            });
            classes[slot].coords.push((t.row, t.col));
        }
    } else {
        let mut distinct: Vec<Complex64> = Vec::new();
        let mut seen = BTreeMap::new();
        for t in a.triplets() {
            if seen.insert(bit_key(t.value), ()).is_none() {
                distinct.push(t.value);
            }
        }
        distinct.sort_by(|x, y| {
            (x.re, x.im).partial_cmp(&(y.re, y.im)).expect("values are finite")
        });
        let mut rep_of: BTreeMap<(u64, u64), usize> = BTreeMap::new();
        for v in distinct {
            let slot = match classes.last() {
                Some(last) if (v - last.value).norm() <= value_tol => classes.len() - 1,
                _ => {
                    classes.push(ValueClass { value: v, coords: Vec::new() });
                    classes.len() - 1
                }
            };
            rep_of.insert(bit_key(v), slot);
        }
        for t in a.triplets() {
            let slot = rep_of[&bit_key(t.value)];
            classes[slot].coords.push((t.row, t.col));
        }
        for class in &mut classes {
            class.coords.sort_unstable();
        }
    }
    classes
}

/// Proper edge colouring of a bipartite coordinate graph with exactly Δ
/// colours, by the standard alternating-path argument: to colour edge
/// `(u, v)` pick the smallest colour `α` free at `u`; if `α` is busy at `v`,
/// flip the maximal α/β alternating path starting at `v` (where `β` is free
/// at `v`), which frees `α` at `v` without ever reaching `u`.
///
/// Returns one colour index per input edge.
fn edge_color_bipartite(coords: &[(usize, usize)]) -> Vec<usize> {
    // Compress row / column ids to dense indices.
    let mut row_ids: BTreeMap<usize, usize> = BTreeMap::new();
    let mut col_ids: BTreeMap<usize, usize> = BTreeMap::new();
    for &(row, col) in coords {
        let next = row_ids.len();
        row_ids.entry(row).or_insert(next);
        let next = col_ids.len();
        col_ids.entry(col).or_insert(next);
    }
    let edges: Vec<(usize, usize)> = coords
        .iter()
        .map(|&(row, col)| (row_ids[&row], col_ids[&col]))
        .collect();

    let mut row_deg = vec![0usize; row_ids.len()];
    let mut col_deg = vec![0usize; col_ids.len()];
    for &(u, v) in &edges {
        row_deg[u] += 1;
        col_deg[v] += 1;
    }
    let delta = row_deg
        .iter()
        .chain(col_deg.iter())
        .copied()
        .max()
        .unwrap_or(0);

    // slot[vertex][color] = (partner vertex, edge index) currently coloured
    // with `color` at `vertex`.
    let mut row_slots: Vec<Vec<Option<(usize, usize)>>> = vec![vec![None; delta]; row_ids.len()];
    let mut col_slots: Vec<Vec<Option<(usize, usize)>>> = vec![vec![None; delta]; col_ids.len()];
    let mut colors = vec![usize::MAX; edges.len()];

    let free_color = |slots: &[Option<(usize, usize)>]| -> usize {
        slots
            .iter()
            .position(Option::is_none)
            .expect("a free colour always exists below Δ")
    };

    for (edge, &(u, v)) in edges.iter().enumerate() {
        let alpha = free_color(&row_slots[u]);
        if col_slots[v][alpha].is_none() {
            colors[edge] = alpha;
            row_slots[u][alpha] = Some((v, edge));
            col_slots[v][alpha] = Some((u, edge));
            continue;
        }
        let beta = free_color(&col_slots[v]);

        // Walk the maximal alternating path from `v`, first edge coloured α.
        // The path alternates column/row vertices and α/β colours; it cannot
        // return to `v` (β is free there) nor reach `u` (every row vertex on
        // the path is entered through an α edge, and α is free at `u`).
        let mut path: Vec<usize> = Vec::new();
        let mut on_col_side = true;
        let mut vertex = v;
        let mut color = alpha;
        loop {
            let slot = if on_col_side {
                col_slots[vertex][color]
            } else {
                row_slots[vertex][color]
            };
            match slot {
                None => break,
                Some((next, e)) => {
                    path.push(e);
                    vertex = next;
                    on_col_side = !on_col_side;
                    color = if color == alpha { beta } else { alpha };
                }
            }
        }
        // Swap α and β along the path.
        let old: Vec<(usize, usize)> = path.iter().map(|&e| (e, colors[e])).collect();
        for &(e, c) in &old {
            let (ru, cv) = edges[e];
            row_slots[ru][c] = None;
            col_slots[cv][c] = None;
        }
        for &(e, c) in &old {
            let flipped = if c == alpha { beta } else { alpha };
            let (ru, cv) = edges[e];
            colors[e] = flipped;
            row_slots[ru][flipped] = Some((cv, e));
            col_slots[cv][flipped] = Some((ru, e));
        }
        debug_assert!(col_slots[v][alpha].is_none());
        colors[edge] = alpha;
        row_slots[u][alpha] = Some((v, edge));
        col_slots[v][alpha] = Some((u, edge));
    }
    colors
}

/// Greedy strategy: peel maximal matchings in coordinate order until all
/// edges are used.  Each peel becomes one colour.
fn greedy_matchings(coords: &[(usize, usize)]) -> Vec<usize> {
    let mut colors = vec![usize::MAX; coords.len()];
    let mut remaining: Vec<usize> = (0..coords.len()).collect();
    let mut round = 0usize;
    while !remaining.is_empty() {
        let mut used_rows = std::collections::BTreeSet::new();
        let mut used_cols = std::collections::BTreeSet::new();
        let mut next_round = Vec::new();
        for &e in &remaining {
            let (row, col) = coords[e];
            if used_rows.insert(row) && used_cols.insert(col) {
                colors[e] = round;
            } else {
                used_rows.remove(&row); // insert may have succeeded on one side only
                next_round.push(e);
            }
        }
        remaining = next_round;
        round += 1;
    }
    colors
}

/// Deterministic global item order: descending `|value|`, ties broken by the
/// smallest `(column, row)` coordinate.
fn sort_items(items: &mut [DataItem]) {
    items.sort_by(|a, b| {
        b.value()
            .norm()
            .partial_cmp(&a.value().norm())
            .expect("values are finite")
            .then_with(|| a.first_coordinate().cmp(&b.first_coordinate()))
    });
}
