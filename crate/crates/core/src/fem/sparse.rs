use num_complex::Complex64 as C;

/// Real compressed-row matrix with duplicates summed.
#[derive(Clone, Debug, PartialEq)]
pub struct Csr {
    pub n: usize,
    pub row_ptr: Vec<usize>,
    pub cols: Vec<usize>,
    pub vals: Vec<f64>,
}

impl Csr {
    pub fn from_triplets(n: usize, mut t: Vec<(usize, usize, f64)>) -> Self {
        t.sort_unstable_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        let mut row_ptr = vec![0; n + 1];
        let mut cols = Vec::with_capacity(t.len());
        let mut vals: Vec<f64> = Vec::with_capacity(t.len());
        let mut last = None;
        for (r, c, v) in t {
            if last == Some((r, c)) {
                *vals.last_mut().unwrap() += v;
            } else {
                cols.push(c);
                vals.push(v);
                row_ptr[r + 1] += 1;
                last = Some((r, c));
            }
        }
        for i in 0..n {
            row_ptr[i + 1] += row_ptr[i];
        }
        Self { n, row_ptr, cols, vals }
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        (self.row_ptr[i]..self.row_ptr[i + 1]).map(move |k| (self.cols[k], self.vals[k]))
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n).flat_map(move |i| self.row(i).map(move |(j, v)| (i, j, v)))
    }

    pub fn mul(&self, x: &[C]) -> Vec<C> {
        (0..self.n).map(|i| self.row(i).map(|(j, v)| x[j] * v).sum()).collect()
    }

    pub fn mul_real(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n).map(|i| self.row(i).map(|(j, v)| x[j] * v).sum()).collect()
    }

    /// `y^H A x`.
    pub fn form(&self, y: &[C], x: &[C]) -> C {
        (0..self.n).map(|i| y[i].conj() * self.row(i).map(|(j, v)| x[j] * v).sum::<C>()).sum()
    }

    /// `x^H A x` for symmetric `A`, returned as a real number.
    pub fn quad(&self, x: &[C]) -> f64 {
        self.form(x, x).re
    }

    /// Principal submatrix on `keep` (sorted), renumbered.
    pub fn restrict(&self, keep: &[usize], map: &[Option<usize>]) -> Self {
        let t = keep
            .iter()
            .enumerate()
            .flat_map(|(fi, &i)| self.row(i).filter_map(move |(j, v)| map[j].map(|fj| (fi, fj, v))))
            .collect();
        Self::from_triplets(keep.len(), t)
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        let scale = self.vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        self.triplets().all(|(i, j, v)| {
            let w: f64 = self.row(j).filter(|&(c, _)| c == i).map(|(_, v)| v).sum();
            (v - w).abs() <= tol * scale
        })
    }
}

pub fn dot(a: &[C], b: &[C]) -> C {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm2(a: &[C]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}
