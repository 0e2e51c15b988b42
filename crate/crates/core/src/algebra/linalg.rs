//! Exact sparse row reduction over the rationals.

use std::collections::BTreeMap;

use super::rat::Rat;

/// Sparse vector: `(column, value)` pairs with strictly increasing columns
/// and no zero values.
pub type SparseRow = Vec<(usize, Rat)>;

/// Incrementally maintained reduced row echelon form.
///
/// Every stored row has leading entry one in its pivot column, which is the
/// lowest column of the row, and no other stored row has an entry there.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    ncols: usize,
    rows: Vec<SparseRow>,
    pivots: BTreeMap<usize, usize>,
}

impl Echelon {
    pub fn new(ncols: usize) -> Echelon {
        Echelon {
            ncols,
            rows: Vec::new(),
            pivots: BTreeMap::new(),
        }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ncols
    }

    /// Reduce `row` against the stored rows.
    pub fn reduce(&self, row: &SparseRow) -> SparseRow {
        let mut acc: BTreeMap<usize, Rat> = row.iter().cloned().collect();
        for (col, coef) in row {
            if let Some(&r) = self.pivots.get(col) {
                for (j, v) in &self.rows[r] {
                    let e = acc.entry(*j).or_insert_with(Rat::zero);
                    *e -= &(coef * v);
                }
            }
        }
        acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
    }

    /// Add a row; returns whether the rank grew.
    pub fn insert(&mut self, row: &SparseRow) -> bool {
        let red = self.reduce(row);
        let Some((pcol, lead)) = red.first().cloned() else {
            return false;
        };
        let inv = lead.recip();
        let red: SparseRow = red.into_iter().map(|(j, v)| (j, v * &inv)).collect();
        for stored in self.rows.iter_mut() {
            let Ok(pos) = stored.binary_search_by_key(&pcol, |(j, _)| *j) else {
                continue;
            };
            let c = stored[pos].1.clone();
            *stored = axpy(stored, &red, &c);
        }
        self.pivots.insert(pcol, self.rows.len());
        self.rows.push(red);
        true
    }

    pub fn contains(&self, row: &SparseRow) -> bool {
        self.reduce(row).is_empty()
    }

    /// Rows sorted by pivot column.
    pub fn rows(&self) -> Vec<SparseRow> {
        self.pivots.values().map(|&r| self.rows[r].clone()).collect()
    }

    pub fn pivot_columns(&self) -> Vec<usize> {
        self.pivots.keys().copied().collect()
    }

    /// Basis of the null space `{v : row . v = 0 for every stored row}`,
    /// one vector per free column, in ascending free-column order.
    pub fn kernel(&self) -> Vec<SparseRow> {
        let mut out = Vec::new();
        for free in (0..self.ncols).filter(|c| !self.pivots.contains_key(c)) {
            let mut v: SparseRow = Vec::new();
            for (&p, &r) in &self.pivots {
                if let Ok(pos) = self.rows[r].binary_search_by_key(&free, |(j, _)| *j) {
                    v.push((p, -&self.rows[r][pos].1));
                }
            }
            v.push((free, Rat::one()));
            v.sort_by_key(|(j, _)| *j);
            out.push(v);
        }
        out
    }
}

/// `a - c * b`.
fn axpy(a: &SparseRow, b: &SparseRow, c: &Rat) -> SparseRow {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i].clone());
            i += 1;
        } else if take_b {
            out.push((b[j].0, -(c * &b[j].1)));
            j += 1;
        } else {
            let v = &a[i].1 - &(c * &b[j].1);
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Null space of a dense matrix given by rows.
pub fn kernel(rows: &[Vec<Rat>], ncols: usize) -> Vec<Vec<Rat>> {
    let mut ech = Echelon::new(ncols);
    for r in rows {
        let sparse: SparseRow = r
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(j, v)| (j, v.clone()))
            .collect();
        ech.insert(&sparse);
        if ech.is_full() {
            break;
        }
    }
    ech.kernel()
        .into_iter()
        .map(|v| {
            let mut dense = vec![Rat::zero(); ncols];
            for (j, x) in v {
                dense[j] = x;
            }
            dense
        })
        .collect()
}
