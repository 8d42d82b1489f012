//! Filon-type panel rule: the phase is linearised about the panel midpoint,
//! the remaining smooth factor is interpolated on Chebyshev-Lobatto nodes and
//! the polynomial times `exp(i * linear phase)` is integrated in closed form.

use std::sync::OnceLock;

use num_complex::Complex;

use crate::error::QuadError;
use crate::scalar::Real;

use super::adaptive::{PanelEval, PanelRule};
use super::kronrod::gk15;
use super::OscillatoryIntegrand;

const DEGREE: usize = 8;
const NODES: usize = DEGREE + 1;
const COARSE: usize = DEGREE / 2 + 1;

struct Tables {
    nodes: [f64; NODES],
    fine: [[f64; NODES]; NODES],
    coarse: [[f64; COARSE]; COARSE],
}

fn tables() -> &'static Tables {
    static TABLES: OnceLock<Tables> = OnceLock::new();
    TABLES.get_or_init(|| {
        let mut nodes = [0.0; NODES];
        for (j, t) in nodes.iter_mut().enumerate() {
            *t = (j as f64 * std::f64::consts::PI / DEGREE as f64).cos();
        }
        nodes[DEGREE / 2] = 0.0;
        let mut coarse_nodes = [0.0; COARSE];
        for (j, t) in coarse_nodes.iter_mut().enumerate() {
            *t = nodes[2 * j];
        }
        Tables {
            nodes,
            fine: vandermonde_inverse(&nodes),
            coarse: vandermonde_inverse(&coarse_nodes),
        }
    })
}

/// Inverse of `V[j][k] = t_j^k`, returned as `inv[k][j]`.
fn vandermonde_inverse<const N: usize>(t: &[f64; N]) -> [[f64; N]; N] {
    let mut a = [[0.0; N]; N];
    let mut inv = [[0.0; N]; N];
    for j in 0..N {
        for k in 0..N {
            a[j][k] = t[j].powi(k as i32);
        }
        inv[j][j] = 1.0;
    }
    for col in 0..N {
        let pivot = (col..N)
            .max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))
            .unwrap();
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col];
        for k in 0..N {
            a[col][k] /= p;
            inv[col][k] /= p;
        }
        for row in 0..N {
            if row != col {
                let factor = a[row][col];
                if factor != 0.0 {
                    for k in 0..N {
                        a[row][k] -= factor * a[col][k];
                        inv[row][k] -= factor * inv[col][k];
                    }
                }
            }
        }
    }
    inv
}

/// Moments `M_k(w) = ∫_{-1}^{1} t^k exp(i w t) dt` for `k = 0..=DEGREE`.
///
/// Upward recurrence for `|w| >= 2`, Taylor series below that.
pub(crate) fn moments<T: Real>(w: T) -> [Complex<T>; NODES] {
    let mut m = [Complex::new(T::zero(), T::zero()); NODES];
    if w.abs() < T::lit(2.0) {
        // sum_j (i w)^j / j! * c_{k+j}, c_n = 2/(n+1) for even n
        let iw = Complex::new(T::zero(), w);
        for (k, mk) in m.iter_mut().enumerate() {
            let mut term = Complex::new(T::one(), T::zero());
            let mut acc = Complex::new(T::zero(), T::zero());
            for j in 0..48 {
                let n = k + j;
                if n % 2 == 0 {
                    acc = acc + term * T::lit(2.0 / (n as f64 + 1.0));
                }
                term = term * iw / T::lit(j as f64 + 1.0);
            }
            *mk = acc;
        }
    } else {
        let e_plus = Complex::new(w.cos(), w.sin());
        let e_minus = e_plus.conj();
        let inv_iw = Complex::new(T::zero(), -T::one() / w);
        m[0] = Complex::new(T::lit(2.0) * w.sin() / w, T::zero());
        for k in 1..NODES {
            let boundary = if k % 2 == 0 {
                e_plus - e_minus
            } else {
                e_plus + e_minus
            };
            m[k] = (boundary - m[k - 1] * T::lit(k as f64)) * inv_iw;
        }
    }
    m
}

pub(crate) struct FilonRule<'a, T: Real> {
    pub integrand: &'a OscillatoryIntegrand<T>,
    pub derivative: &'a (dyn Fn(T) -> T + Send + Sync),
}

impl<T: Real> FilonRule<'_, T> {
    fn stationary(&self, a: T, m: T, b: T) -> bool {
        let da = (self.derivative)(a);
        let dm = (self.derivative)(m);
        let db = (self.derivative)(b);
        let s = da.signum();
        da == T::zero()
            || dm == T::zero()
            || db == T::zero()
            || dm.signum() != s
            || db.signum() != s
    }
}

impl<T: Real> PanelRule<T> for FilonRule<'_, T> {
    fn eval(&self, a: T, b: T) -> Result<PanelEval<T>, QuadError> {
        let half = (b - a) / T::lit(2.0);
        let mid = a + half;
        if self.stationary(a, mid, b) {
            let f = |z: T| self.integrand.eval(z);
            let mut e = gk15(&f, a, b)?;
            e.fallback = true;
            return Ok(e);
        }

        let tab = tables();
        let kappa = (self.derivative)(mid);
        let phi_mid = self.integrand.phase_at(mid);
        if !kappa.is_finite() || !phi_mid.is_finite() {
            return Err(QuadError::NonFinite { z: mid.as_f64() });
        }

        let mut h = [Complex::new(T::zero(), T::zero()); NODES];
        let mut h_abs = T::zero();
        for (j, hj) in h.iter_mut().enumerate() {
            let t = T::lit(tab.nodes[j]);
            let z = mid + half * t;
            let g = self.integrand.amplitude_at(z);
            let residual = self.integrand.phase_at(z) - phi_mid - kappa * half * t;
            let v = g * Complex::new(residual.cos(), residual.sin());
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err(QuadError::NonFinite { z: z.as_f64() });
            }
            h_abs = h_abs.max(v.norm());
            *hj = v;
        }

        let mom = moments(kappa * half);
        let mut fine = Complex::new(T::zero(), T::zero());
        for j in 0..NODES {
            let mut w = Complex::new(T::zero(), T::zero());
            for (k, mk) in mom.iter().enumerate() {
                w = w + *mk * T::lit(tab.fine[k][j]);
            }
            fine = fine + h[j] * w;
        }
        let mut coarse = Complex::new(T::zero(), T::zero());
        for j in 0..COARSE {
            let mut w = Complex::new(T::zero(), T::zero());
            for k in 0..COARSE {
                w = w + mom[k] * T::lit(tab.coarse[k][j]);
            }
            coarse = coarse + h[2 * j] * w;
        }

        let rot = Complex::new(phi_mid.cos(), phi_mid.sin()) * half;
        let floor = T::lit(100.0) * T::epsilon() * h_abs * half.abs();
        Ok(PanelEval {
            value: fine * rot,
            err: ((fine - coarse) * half).norm().max(floor),
            floor,
            fallback: false,
        })
    }
}
