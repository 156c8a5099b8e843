use crate::error::{Error, Result};

/// Stopping rules for the scalar root finders and minimizers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_iter: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            rel_tol: 1e-10,
            max_iter: 200,
        }
    }
}

impl Tolerances {
    pub fn new(abs_tol: f64, rel_tol: f64, max_iter: usize) -> Result<Self> {
        if !(abs_tol > 0.0) {
            return Err(crate::error::domain("abs_tol", abs_tol, "> 0"));
        }
        if !(rel_tol > 0.0) {
            return Err(crate::error::domain("rel_tol", rel_tol, "> 0"));
        }
        if max_iter == 0 {
            return Err(Error::Degenerate("max_iter must be at least 1".into()));
        }
        Ok(Self {
            abs_tol,
            rel_tol,
            max_iter,
        })
    }

    /// Runs until the bracket collapses to adjacent floats.
    pub(crate) fn exhaustive() -> Self {
        Self {
            abs_tol: f64::MIN_POSITIVE,
            rel_tol: 2.0 * f64::EPSILON,
            max_iter: 2000,
        }
    }

    fn done(&self, lo: f64, hi: f64) -> bool {
        let mid = 0.5 * (lo + hi);
        hi - lo <= self.abs_tol.max(self.rel_tol * mid.abs()) || mid <= lo || mid >= hi
    }
}

/// Bisection for a sign change of `f` on `[lo, hi]`.
pub fn bisect<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, tol: &Tolerances) -> Result<f64> {
    let (mut lo, mut hi) = (lo, hi);
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.is_nan() || f_hi.is_nan() || f_lo.signum() == f_hi.signum() {
        return Err(Error::Bracket(format!(
            "no sign change on [{lo}, {hi}]: f = ({f_lo}, {f_hi})"
        )));
    }
    for _ in 0..tol.max_iter {
        if tol.done(lo, hi) {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for the minimum of a unimodal `f` on `[lo, hi]`.
/// Returns `(x, f(x))`; the endpoints are also compared so a boundary
/// minimum is reported exactly.
pub fn golden_section_min<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    hi: f64,
    tol: &Tolerances,
) -> (f64, f64) {
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..tol.max_iter {
        if tol.done(a, b) {
            break;
        }
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let mut best = if fc <= fd { (c, fc) } else { (d, fd) };
    for x in [lo, hi] {
        let fx = f(x);
        if fx < best.1 {
            best = (x, fx);
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisect_finds_sqrt2() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0, &Tolerances::exhaustive()).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn bisect_rejects_missing_sign_change() {
        assert!(bisect(|x| x * x + 1.0, -1.0, 1.0, &Tolerances::default()).is_err());
    }

    #[test]
    fn golden_interior_and_boundary() {
        let tol = Tolerances::default();
        let (x, _) = golden_section_min(|x| (x - 0.3).powi(2), 0.0, 1.0, &tol);
        assert!((x - 0.3).abs() < 1e-6);
        let (x, fx) = golden_section_min(|x| x, 0.0, 1.0, &tol);
        assert_eq!((x, fx), (0.0, 0.0));
    }

    #[test]
    fn tolerances_validate() {
        assert!(Tolerances::new(0.0, 1e-3, 10).is_err());
        assert!(Tolerances::new(1e-3, 1e-3, 0).is_err());
        assert!(Tolerances::new(1e-3, 1e-3, 1).is_ok());
    }
}
