//! Sellmeier dispersion models loaded from versioned coefficient files.

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::scalar::Real;

const KTP_KATO2002: &str = include_str!("../../data/ktp_kato2002.toml");

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SellmeierFile {
    name: String,
    citation: String,
    version: u32,
    axis: Vec<AxisRecord>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct AxisRecord {
    axis: String,
    a: f64,
    #[serde(default)]
    poles: Vec<[f64; 2]>,
    #[serde(default)]
    d: f64,
    window_nm: [f64; 2],
}

/// `n²(λ) = A + Σ Bᵢ/(λ² - Cᵢ) - Dλ²` with `λ` in micrometres.
#[derive(Debug, Clone, PartialEq)]
pub struct SellmeierModel<T> {
    pub name: String,
    pub axis: String,
    /// Citation of the published coefficient set.
    pub source: String,
    pub a: T,
    pub poles: Vec<(T, T)>,
    pub d: T,
    /// Validity window in micrometres.
    pub window_um: (T, T),
}

impl<T: Real> SellmeierModel<T> {
    /// `n ≡ 1`, valid everywhere.
    pub fn vacuum() -> Self {
        Self::constant(T::one())
    }

    /// Dispersionless medium with index `n`.
    pub fn constant(n: T) -> Self {
        Self {
            name: format!("constant n = {n}"),
            axis: String::new(),
            source: "none".into(),
            a: n * n,
            poles: Vec::new(),
            d: T::zero(),
            window_um: (T::zero(), T::infinity()),
        }
    }

    pub fn in_window(&self, lambda_um: T) -> bool {
        lambda_um >= self.window_um.0 && lambda_um <= self.window_um.1
    }

    fn check(&self, lambda_um: T) -> Result<()> {
        if self.in_window(lambda_um) {
            Ok(())
        } else {
            Err(Error::domain(format!(
                "wavelength {:.1} nm outside the {} validity window [{:.0}, {:.0}] nm",
                lambda_um.as_f64() * 1e3,
                self.name,
                self.window_um.0.as_f64() * 1e3,
                self.window_um.1.as_f64() * 1e3
            )))
        }
    }

    /// `n(λ)`.
    pub fn index(&self, lambda_um: T) -> Result<T> {
        self.check(lambda_um)?;
        Ok(self.n_squared(lambda_um).sqrt())
    }

    /// `(n, dn/dλ)` with `dn/dλ` per micrometre.
    pub fn index_and_slope(&self, lambda_um: T) -> Result<(T, T)> {
        self.check(lambda_um)?;
        let l2 = lambda_um * lambda_um;
        let n = self.n_squared(lambda_um).sqrt();
        let mut dn2 = -T::lit(2.0) * self.d * lambda_um;
        for &(b, c) in &self.poles {
            let den = l2 - c;
            dn2 -= T::lit(2.0) * lambda_um * b / (den * den);
        }
        Ok((n, dn2 / (n + n)))
    }

    fn n_squared(&self, lambda_um: T) -> T {
        let l2 = lambda_um * lambda_um;
        let mut s = self.a - self.d * l2;
        for &(b, c) in &self.poles {
            s += b / (l2 - c);
        }
        s
    }
}

/// Named per-axis Sellmeier models of one crystal.
#[derive(Debug, Clone, PartialEq)]
pub struct SellmeierSet<T> {
    pub name: String,
    pub citation: String,
    pub version: u32,
    pub axes: Vec<SellmeierModel<T>>,
}

impl<T: Real> SellmeierSet<T> {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let file: SellmeierFile = toml::from_str(text).map_err(|e| Error::Data(e.to_string()))?;
        let mut axes = Vec::with_capacity(file.axis.len());
        for rec in file.axis {
            let [lo, hi] = rec.window_nm;
            if !(lo > 0.0 && hi > lo) {
                return Err(Error::Data(format!(
                    "axis {}: bad window {lo}-{hi} nm",
                    rec.axis
                )));
            }
            let model = SellmeierModel {
                name: format!("{} n_{}", file.name, rec.axis),
                axis: rec.axis,
                source: file.citation.clone(),
                a: T::lit(rec.a),
                poles: rec
                    .poles
                    .iter()
                    .map(|&[b, c]| (T::lit(b), T::lit(c)))
                    .collect(),
                d: T::lit(rec.d),
                window_um: (T::lit(lo * 1e-3), T::lit(hi * 1e-3)),
            };
            // coarse sanity scan: real index above one across the window
            for i in 0..=64 {
                let l = lo + (hi - lo) * i as f64 / 64.0;
                let n = model.index(T::lit(l * 1e-3))?;
                if !(n > T::one()) {
                    return Err(Error::Data(format!(
                        "axis {}: n = {n} at {l} nm is not > 1",
                        model.axis
                    )));
                }
            }
            axes.push(model);
        }
        Ok(Self {
            name: file.name,
            citation: file.citation,
            version: file.version,
            axes,
        })
    }

    /// Flux-grown KTP, Kato & Takaoka (2002).
    pub fn ktp() -> Self {
        Self::from_toml_str(KTP_KATO2002).expect("bundled KTP coefficients parse")
    }

    pub fn axis(&self, name: &str) -> Result<SellmeierModel<T>> {
        self.axes
            .iter()
            .find(|m| m.axis == name)
            .cloned()
            .ok_or_else(|| Error::Data(format!("{} has no axis {name:?}", self.name)))
    }
}
