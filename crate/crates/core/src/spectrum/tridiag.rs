//! Symmetric tridiagonal eigensolver: Sturm-sequence bisection for the
//! lowest eigenvalues, inverse iteration for their eigenvectors.

#[derive(Debug, Clone)]
pub(crate) struct SymTridiagonal {
    diag: Vec<f64>,
    off: Vec<f64>,
}

impl SymTridiagonal {
    pub(crate) fn new(diag: Vec<f64>, off: Vec<f64>) -> Self {
        assert!(!diag.is_empty());
        assert_eq!(off.len() + 1, diag.len());
        SymTridiagonal { diag, off }
    }

    pub(crate) fn dim(&self) -> usize {
        self.diag.len()
    }

    fn gershgorin(&self) -> (f64, f64) {
        let n = self.dim();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let left = if i > 0 { self.off[i - 1].abs() } else { 0.0 };
            let right = if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - left - right);
            hi = hi.max(self.diag[i] + left + right);
        }
        let pad = f64::EPSILON * (lo.abs().max(hi.abs())) * self.dim() as f64;
        (lo - pad, hi + pad)
    }

    /// Number of eigenvalues strictly below `x`.
    fn count_below(&self, x: f64, pivmin: f64) -> usize {
        let mut count = 0;
        let mut q = self.diag[0] - x;
        if q.abs() < pivmin {
            q = -pivmin;
        }
        if q < 0.0 {
            count += 1;
        }
        for i in 1..self.dim() {
            let e = self.off[i - 1];
            q = self.diag[i] - x - e * e / q;
            if q.abs() < pivmin {
                q = -pivmin;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// The `k` smallest eigenvalues in ascending order.
    pub(crate) fn lowest_eigenvalues(&self, k: usize) -> Vec<f64> {
        let k = k.min(self.dim());
        let (lo0, hi0) = self.gershgorin();
        let max_e2 = self.off.iter().map(|e| e * e).fold(0.0, f64::max);
        let pivmin = f64::MIN_POSITIVE * max_e2.max(1.0);

        let mut values = Vec::with_capacity(k);
        let mut floor = lo0;
        for index in 0..k {
            let mut lo = floor;
            let mut hi = hi0;
            for _ in 0..256 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if self.count_below(mid, pivmin) > index {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            let value = 0.5 * (lo + hi);
            values.push(value);
            floor = lo;
        }
        values
    }

    /// Unit (Euclidean) eigenvector for the eigenvalue `shift`, made
    /// orthogonal to every vector in `previous`.
    pub(crate) fn eigenvector(&self, shift: f64, previous: &[Vec<f64>]) -> Vec<f64> {
        let n = self.dim();
        let lu = ShiftedLu::factor(self, shift);

        // Deterministic start vector with no special symmetry.
        let mut x: Vec<f64> = (0..n)
            .map(|i| 1.0 + 0.5 * ((i as f64 + 1.0) * 0.618_033_988_749_895).fract())
            .collect();
        normalize(&mut x);
        for _ in 0..4 {
            lu.solve(&mut x);
            orthogonalize(&mut x, previous);
            normalize(&mut x);
        }
        x
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn normalize(x: &mut [f64]) {
    let norm = dot(x, x).sqrt();
    x.iter_mut().for_each(|v| *v /= norm);
}

fn orthogonalize(x: &mut [f64], basis: &[Vec<f64>]) {
    for b in basis {
        let proj = dot(x, b);
        x.iter_mut().zip(b).for_each(|(v, w)| *v -= proj * w);
    }
}

/// LU factorization of `T - shift·I` with partial pivoting, in the layout
/// of LAPACK's `dgttrf`.
struct ShiftedLu {
    dl: Vec<f64>,
    d: Vec<f64>,
    du: Vec<f64>,
    du2: Vec<f64>,
    swapped: Vec<bool>,
}

impl ShiftedLu {
    fn factor(t: &SymTridiagonal, shift: f64) -> Self {
        let n = t.dim();
        let mut dl = t.off.clone();
        let mut du = t.off.clone();
        let mut d: Vec<f64> = t.diag.iter().map(|v| v - shift).collect();
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut swapped = vec![false; n.saturating_sub(1)];

        for i in 0..n.saturating_sub(1) {
            if d[i].abs() >= dl[i].abs() {
                if d[i] != 0.0 {
                    let fact = dl[i] / d[i];
                    dl[i] = fact;
                    d[i + 1] -= fact * du[i];
                }
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                let temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] *= -fact;
                }
                swapped[i] = true;
            }
        }

        // Exactly singular pivots are expected when the shift is an
        // eigenvalue to working precision.
        let scale = t
            .diag
            .iter()
            .chain(&t.off)
            .fold(0.0_f64, |m, v| m.max(v.abs()));
        let tiny = f64::EPSILON * scale.max(1.0);
        for p in d.iter_mut() {
            if p.abs() < tiny {
                *p = if *p < 0.0 { -tiny } else { tiny };
            }
        }

        ShiftedLu {
            dl,
            d,
            du,
            du2,
            swapped,
        }
    }

    fn solve(&self, b: &mut [f64]) {
        let n = self.d.len();
        for i in 0..n - 1 {
            if self.swapped[i] {
                let temp = b[i] - self.dl[i] * b[i + 1];
                b[i] = b[i + 1];
                b[i + 1] = temp;
            } else {
                b[i + 1] -= self.dl[i] * b[i];
            }
        }
        b[n - 1] /= self.d[n - 1];
        if n > 1 {
            b[n - 2] = (b[n - 2] - self.du[n - 2] * b[n - 1]) / self.d[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            b[i] = (b[i] - self.du[i] * b[i + 1] - self.du2[i] * b[i + 2]) / self.d[i];
        }
    }
}
