use std::io::{self, Write};

use crate::{Error, Result};

/// Compressed sparse row matrix of `f64`; explicit zeros are not stored.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix {
    n_cols: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<f64>,
}

impl SparseMatrix {
    pub fn new(n_cols: usize) -> Self {
        SparseMatrix {
            n_cols,
            indptr: vec![0],
            indices: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn from_dense(rows: &[Vec<f64>], n_cols: usize) -> Self {
        let mut m = Self::new(n_cols);
        for row in rows {
            m.push_row(row.iter().copied().enumerate());
        }
        m
    }

    /// Appends a row. Entries must be in increasing column order.
    pub fn push_row(&mut self, entries: impl IntoIterator<Item = (usize, f64)>) {
        let mut last = None;
        for (col, value) in entries {
            assert!(col < self.n_cols, "column {col} out of range {}", self.n_cols);
            assert!(last.is_none_or(|l| l < col), "columns must increase");
            last = Some(col);
            if value != 0.0 {
                self.indices.push(col);
                self.values.push(value);
            }
        }
        self.indptr.push(self.indices.len());
    }

    pub fn n_rows(&self) -> usize {
        self.indptr.len() - 1
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let (s, e) = (self.indptr[i], self.indptr[i + 1]);
        (&self.indices[s..e], &self.values[s..e])
    }

    pub fn row_iter(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let (idx, val) = self.row(i);
        idx.iter().copied().zip(val.iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (idx, val) = self.row(i);
        idx.binary_search(&j).map_or(0.0, |k| val[k])
    }

    pub fn row_dot(&self, i: usize, weights: &[f64]) -> f64 {
        self.row_iter(i).map(|(j, v)| v * weights[j]).sum()
    }

    pub fn row_norm(&self, i: usize) -> f64 {
        self.row(i).1.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        (0..self.n_rows())
            .map(|i| {
                let mut row = vec![0.0; self.n_cols];
                for (j, v) in self.row_iter(i) {
                    row[j] = v;
                }
                row
            })
            .collect()
    }

    /// Rows in the given order.
    pub fn select_rows(&self, rows: &[usize]) -> Self {
        let mut out = Self::new(self.n_cols);
        for &i in rows {
            out.push_row(self.row_iter(i));
        }
        out
    }

    /// Keeps the listed columns (increasing), renumbered from zero.
    pub fn select_columns(&self, columns: &[usize]) -> Self {
        let mut remap = vec![usize::MAX; self.n_cols];
        for (new, &old) in columns.iter().enumerate() {
            remap[old] = new;
        }
        let mut out = Self::new(columns.len());
        for i in 0..self.n_rows() {
            out.push_row(
                self.row_iter(i)
                    .filter(|(j, _)| remap[*j] != usize::MAX)
                    .map(|(j, v)| (remap[j], v)),
            );
        }
        out
    }

    /// Horizontal concatenation.
    pub fn hstack(blocks: &[&SparseMatrix]) -> Result<Self> {
        let Some(first) = blocks.first() else {
            return Ok(Self::new(0));
        };
        let rows = first.n_rows();
        if let Some(bad) = blocks.iter().find(|b| b.n_rows() != rows) {
            return Err(Error::Shape(format!(
                "cannot concatenate blocks with {} and {} rows",
                rows,
                bad.n_rows()
            )));
        }
        let width = blocks.iter().map(|b| b.n_cols).sum();
        let mut out = Self::new(width);
        for i in 0..rows {
            let mut offset = 0;
            let mut entries = Vec::new();
            for b in blocks {
                entries.extend(b.row_iter(i).map(|(j, v)| (j + offset, v)));
                offset += b.n_cols;
            }
            out.push_row(entries);
        }
        Ok(out)
    }

    /// Vertical concatenation.
    pub fn vstack(blocks: &[&SparseMatrix]) -> Result<Self> {
        let Some(first) = blocks.first() else {
            return Ok(Self::new(0));
        };
        let mut out = Self::new(first.n_cols);
        for b in blocks {
            if b.n_cols != first.n_cols {
                return Err(Error::Shape(format!(
                    "cannot stack blocks with {} and {} columns",
                    first.n_cols, b.n_cols
                )));
            }
            for i in 0..b.n_rows() {
                out.push_row(b.row_iter(i));
            }
        }
        Ok(out)
    }

    /// Writes `row col value` lines, one per stored entry.
    pub fn write_triplets<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "# rows={} cols={}", self.n_rows(), self.n_cols)?;
        for i in 0..self.n_rows() {
            for (j, v) in self.row_iter(i) {
                writeln!(w, "{i} {j} {v}")?;
            }
        }
        Ok(())
    }
}
