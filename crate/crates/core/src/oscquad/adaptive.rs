//! Global adaptive bisection shared by the Gauss-Kronrod and Filon rules.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex;

use crate::error::QuadError;
use crate::scalar::{KahanSum, Real};

use super::QuadConfig;

/// Result of one panel rule application.
#[derive(Debug, Clone, Copy)]
pub(crate) struct PanelEval<T> {
    pub value: Complex<T>,
    pub err: T,
    /// Error level below which bisection cannot help.
    pub floor: T,
    /// Set when a Filon panel fell back to Gauss-Kronrod.
    pub fallback: bool,
}

pub(crate) trait PanelRule<T: Real> {
    fn eval(&self, a: T, b: T) -> Result<PanelEval<T>, QuadError>;
}

#[derive(Debug, Clone)]
pub(crate) struct Outcome<T> {
    pub value: Complex<T>,
    pub abs_error: T,
    pub bounds: Vec<(T, T)>,
    pub fallback_panels: usize,
    pub roundoff_limited: bool,
}

struct Entry<T> {
    key: f64,
    seq: u64,
    a: T,
    b: T,
    eval: PanelEval<T>,
}

impl<T> PartialEq for Entry<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl<T> Eq for Entry<T> {}
impl<T> PartialOrd for Entry<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T> Ord for Entry<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        // Largest error first; older panels win ties so the order is reproducible.
        self.key
            .total_cmp(&other.key)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

/// Refines `initial` panels until the summed error meets the tolerance.
pub(crate) fn refine<T: Real, R: PanelRule<T>>(
    rule: &R,
    initial: &[(T, T)],
    cfg: &QuadConfig<T>,
) -> Result<Outcome<T>, QuadError> {
    if initial.len() > cfg.max_panels {
        return Err(QuadError::PhaseBudget {
            required_panels: initial.len(),
            max_panels: cfg.max_panels,
            total_phase: f64::NAN,
        });
    }

    let mut heap = BinaryHeap::with_capacity(initial.len() * 2);
    let mut seq = 0u64;
    let mut value = Complex::new(T::zero(), T::zero());
    let mut err = T::zero();

    for &(a, b) in initial {
        let eval = rule.eval(a, b)?;
        value = value + eval.value;
        err += eval.err;
        heap.push(Entry {
            key: eval.err.as_f64(),
            seq,
            a,
            b,
            eval,
        });
        seq += 1;
    }

    let mut roundoff_limited = false;
    let mut iterations = 0usize;
    loop {
        let tol = cfg.abs_tol.max(cfg.rel_tol * value.norm());
        if err <= tol {
            break;
        }
        let worst = heap.pop().expect("at least one panel");
        let width = worst.b - worst.a;
        let scale = worst.a.abs().max(worst.b.abs());
        if worst.eval.err <= worst.eval.floor || width <= T::lit(8.0) * T::epsilon() * scale {
            roundoff_limited = true;
            heap.push(worst);
            break;
        }
        if heap.len() + 2 > cfg.max_panels {
            heap.push(worst);
            let out = collect(heap, roundoff_limited);
            return Err(QuadError::NotConverged {
                value: Complex::new(out.value.re.as_f64(), out.value.im.as_f64()),
                abs_error: out.abs_error.as_f64(),
                panels: out.bounds.len(),
            });
        }
        let mid = worst.a + width / T::lit(2.0);
        let left = rule.eval(worst.a, mid)?;
        let right = rule.eval(mid, worst.b)?;
        value = value - worst.eval.value + left.value + right.value;
        err = err - worst.eval.err + left.err + right.err;
        for (a, b, eval) in [(worst.a, mid, left), (mid, worst.b, right)] {
            heap.push(Entry {
                key: eval.err.as_f64(),
                seq,
                a,
                b,
                eval,
            });
            seq += 1;
        }
        iterations += 1;
        if iterations % 4096 == 0 {
            // resynchronise the running sums
            value = heap
                .iter()
                .fold(Complex::new(T::zero(), T::zero()), |acc, e| {
                    acc + e.eval.value
                });
            err = heap.iter().map(|e| e.eval.err).sum();
        }
    }

    Ok(collect(heap, roundoff_limited))
}

fn collect<T: Real>(heap: BinaryHeap<Entry<T>>, roundoff_limited: bool) -> Outcome<T> {
    let mut panels = heap.into_vec();
    panels.sort_by(|x, y| x.a.partial_cmp(&y.a).unwrap_or(Ordering::Equal));
    let mut re = KahanSum::new();
    let mut im = KahanSum::new();
    let mut err = KahanSum::new();
    let mut fallback_panels = 0;
    for p in &panels {
        re.add(p.eval.value.re);
        im.add(p.eval.value.im);
        err.add(p.eval.err);
        if p.eval.fallback {
            fallback_panels += 1;
        }
    }
    Outcome {
        value: Complex::new(re.value(), im.value()),
        abs_error: err.value(),
        bounds: panels.iter().map(|p| (p.a, p.b)).collect(),
        fallback_panels,
        roundoff_limited,
    }
}
