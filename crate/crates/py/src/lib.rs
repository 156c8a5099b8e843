//! Python bindings. Channel kinds, bound variants and scheme names are
//! passed as lower-case strings.

use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use waterslide::asymptotics::{self as asym, GapPoint, PeTarget};
use waterslide::bounds::{self, BoundVariant, TConvention};
use waterslide::channels::{self, ChannelKind, TestChannel};
use waterslide::classical::{self, BlockExponent, SchemeKind};
use waterslide::numerics;
use waterslide::optimizer::{self, WaterfallBaseline};
use waterslide::Error;

create_exception!(waterslide, InfeasibleError, PyValueError);

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Domain { .. } | Error::Degenerate(_) => PyValueError::new_err(e.to_string()),
        Error::Infeasible(_) => InfeasibleError::new_err(e.to_string()),
        Error::Bracket(_) => PyRuntimeError::new_err(e.to_string()),
    }
}

trait IntoPy<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> IntoPy<T> for waterslide::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(to_py)
    }
}

fn parse_kind(kind: &str) -> PyResult<ChannelKind> {
    match kind {
        "bsc" => Ok(ChannelKind::BscFromBpskHard),
        "awgn" => Ok(ChannelKind::Awgn),
        _ => Err(PyValueError::new_err(format!("unknown channel kind {kind:?}; use 'bsc' or 'awgn'"))),
    }
}

fn kind_name(kind: ChannelKind) -> &'static str {
    match kind {
        ChannelKind::BscFromBpskHard => "bsc",
        ChannelKind::Awgn => "awgn",
    }
}

fn parse_variant(variant: &str) -> PyResult<BoundVariant> {
    match variant {
        "asymptotic" => Ok(BoundVariant::Asymptotic),
        "numeric" => Ok(BoundVariant::Numeric),
        "combined" => Ok(BoundVariant::Combined),
        _ => Err(PyValueError::new_err(format!(
            "unknown bound variant {variant:?}; use 'asymptotic', 'numeric' or 'combined'"
        ))),
    }
}

fn parse_scheme(scheme: &str) -> PyResult<SchemeKind> {
    match scheme {
        "repetition" => Ok(SchemeKind::Repetition),
        "block-ml" => Ok(SchemeKind::BlockMl),
        "viterbi" => Ok(SchemeKind::Viterbi),
        "magic-seq" => Ok(SchemeKind::MagicSequential),
        "magic-syn" => Ok(SchemeKind::MagicSyndrome),
        _ => Err(PyValueError::new_err(format!("unknown scheme {scheme:?}"))),
    }
}

/// A channel at a given SNR (or BSC crossover).
#[pyclass(name = "Channel", frozen)]
struct PyChannel(channels::ChannelPoint);

#[pymethods]
impl PyChannel {
    #[new]
    fn new(kind: &str, snr: f64) -> PyResult<Self> {
        Ok(Self(channels::ChannelPoint::new(parse_kind(kind)?, snr).py()?))
    }

    #[staticmethod]
    fn bsc_with_crossover(p: f64) -> PyResult<Self> {
        Ok(Self(channels::ChannelPoint::bsc_with_crossover(p).py()?))
    }

    #[getter]
    fn kind(&self) -> &'static str {
        kind_name(self.0.kind())
    }

    #[getter]
    fn snr(&self) -> f64 {
        self.0.snr()
    }

    #[getter]
    fn crossover(&self) -> f64 {
        self.0.crossover()
    }

    #[getter]
    fn capacity(&self) -> f64 {
        self.0.capacity()
    }

    fn __repr__(&self) -> String {
        format!("Channel(kind={:?}, snr={})", self.kind(), self.0.snr())
    }
}

#[pyclass(name = "BoundResult", frozen, get_all)]
struct PyBoundResult {
    n: f64,
    log2_pe_bound: f64,
    delta: f64,
    /// "bsc" or "awgn"
    test_channel: &'static str,
    /// Crossover probability or variance ratio of the optimal test channel.
    test_param: f64,
}

impl From<bounds::BoundResult> for PyBoundResult {
    fn from(r: bounds::BoundResult) -> Self {
        let (test_channel, test_param) = match r.opt_test_channel {
            TestChannel::Bsc { crossover } => ("bsc", crossover),
            TestChannel::Awgn { var_ratio } => ("awgn", var_ratio),
        };
        Self {
            n: r.n,
            log2_pe_bound: r.log2_pe_bound,
            delta: r.delta,
            test_channel,
            test_param,
        }
    }
}

/// Lower bounds on error probability for a fixed rate and channel family.
#[pyclass(name = "NeighborhoodBound", frozen)]
struct PyNeighborhoodBound(bounds::NeighborhoodBound);

#[pymethods]
impl PyNeighborhoodBound {
    #[new]
    #[pyo3(signature = (rate, kind, as_printed_t = false))]
    fn new(py: Python<'_>, rate: f64, kind: &str, as_printed_t: bool) -> PyResult<Self> {
        let kind = parse_kind(kind)?;
        let convention = if as_printed_t { TConvention::AsPrinted } else { TConvention::Derived };
        let bound = py.detach(|| bounds::NeighborhoodBound::new(rate, kind)).py()?;
        Ok(Self(bound.with_t_convention(convention)))
    }

    #[getter]
    fn rate(&self) -> f64 {
        self.0.rate()
    }

    fn bsc_pe_lower(&self, p: f64, n: f64) -> PyResult<PyBoundResult> {
        Ok(self.0.bsc_pe_lower(p, n).py()?.into())
    }

    fn awgn_pe_lower_asymptotic(&self, snr: f64, n: f64) -> PyResult<PyBoundResult> {
        Ok(self.0.awgn_pe_lower_asymptotic(snr, n).py()?.into())
    }

    fn awgn_pe_lower_numeric(&self, snr: f64, n: f64) -> PyResult<PyBoundResult> {
        Ok(self.0.awgn_pe_lower_numeric(snr, n).py()?.into())
    }

    #[pyo3(signature = (channel, n, variant = "combined"))]
    fn log2_pe_lower(&self, channel: &PyChannel, n: f64, variant: &str) -> PyResult<f64> {
        self.0.log2_pe_lower(&channel.0, n, parse_variant(variant)?).py()
    }

    #[pyo3(signature = (channel, target_pe, variant = "combined"))]
    fn min_neighborhood(&self, py: Python<'_>, channel: &PyChannel, target_pe: f64, variant: &str) -> PyResult<f64> {
        let variant = parse_variant(variant)?;
        py.detach(|| self.0.min_neighborhood(&channel.0, target_pe, variant)).py()
    }
}

#[pyclass(name = "TechnologyWeights", frozen)]
struct PyTechnologyWeights(optimizer::TechnologyWeights);

#[pymethods]
impl PyTechnologyWeights {
    #[new]
    fn new(gamma: f64, alpha: f64) -> PyResult<Self> {
        Ok(Self(optimizer::TechnologyWeights::new(gamma, alpha).py()?))
    }

    #[staticmethod]
    fn from_raw(xi_t: f64, xi_d: f64, e_node: f64, sigma_p2: f64, alpha: f64) -> PyResult<Self> {
        let raw = optimizer::RawTechnology {
            xi_t,
            xi_d,
            e_node,
            sigma_p2,
        };
        Ok(Self(optimizer::TechnologyWeights::from_raw(raw, alpha).py()?))
    }

    #[getter]
    fn gamma(&self) -> f64 {
        self.0.gamma()
    }

    #[getter]
    fn alpha(&self) -> f64 {
        self.0.alpha()
    }
}

#[pyclass(name = "WaterslidePoint", frozen, get_all)]
struct PyWaterslidePoint {
    target_pe: f64,
    snr_transmit: f64,
    n: f64,
    iterations: f64,
    decode_power_norm: f64,
    total_norm: f64,
}

impl From<optimizer::WaterslidePoint> for PyWaterslidePoint {
    fn from(w: optimizer::WaterslidePoint) -> Self {
        Self {
            target_pe: w.target_pe,
            snr_transmit: w.snr_transmit,
            n: w.n,
            iterations: w.iterations,
            decode_power_norm: w.decode_power_norm,
            total_norm: w.total_norm,
        }
    }
}

/// Minimizes transmit plus decoding power subject to a target error
/// probability.
#[pyclass(name = "PowerOptimizer", frozen)]
struct PyPowerOptimizer(optimizer::PowerOptimizer);

#[pymethods]
impl PyPowerOptimizer {
    #[new]
    #[pyo3(signature = (rate, kind, variant = "combined"))]
    fn new(py: Python<'_>, rate: f64, kind: &str, variant: &str) -> PyResult<Self> {
        let (kind, variant) = (parse_kind(kind)?, parse_variant(variant)?);
        Ok(Self(py.detach(|| optimizer::PowerOptimizer::new(rate, kind, variant)).py()?))
    }

    fn total_power_lower(&self, py: Python<'_>, weights: &PyTechnologyWeights, target_pe: f64) -> PyResult<PyWaterslidePoint> {
        Ok(py.detach(|| self.0.total_power_lower(&weights.0, target_pe)).py()?.into())
    }

    /// One entry per target; `None` where no operating point exists.
    fn waterslide_curve(
        &self,
        py: Python<'_>,
        weights: &PyTechnologyWeights,
        pe_grid: Vec<f64>,
    ) -> PyResult<Vec<Option<PyWaterslidePoint>>> {
        let points = py.detach(|| self.0.waterslide_curve(&weights.0, &pe_grid)).py()?;
        Ok(points.into_iter().map(|p| p.ok().map(Into::into)).collect())
    }
}

#[pyclass(name = "ClassicalOptimum", frozen, get_all)]
struct PyClassicalOptimum {
    snr: f64,
    size: f64,
    size_rounded: f64,
    decode_power: f64,
    total_power: f64,
}

/// A classical coding scheme with a per-operation decoding energy.
#[pyclass(name = "ClassicalScheme", frozen)]
struct PyClassicalScheme(classical::ClassicalScheme);

#[pymethods]
impl PyClassicalScheme {
    #[new]
    #[pyo3(signature = (scheme, rate, energy_per_op, sphere_packing = false))]
    fn new(scheme: &str, rate: f64, energy_per_op: f64, sphere_packing: bool) -> PyResult<Self> {
        let s = classical::ClassicalScheme::new(parse_scheme(scheme)?, rate, energy_per_op).py()?;
        let exponent = if sphere_packing { BlockExponent::SpherePacking } else { BlockExponent::Random };
        Ok(Self(s.with_block_exponent(exponent)))
    }

    /// log2 of the error probability at a given size and SNR.
    fn log2_pe(&self, size: f64, snr: f64) -> PyResult<f64> {
        classical::scheme_pe(&self.0, size, snr).py()
    }

    fn decode_power(&self, size: f64) -> f64 {
        classical::scheme_decode_power(&self.0, size)
    }

    fn optimize(&self, py: Python<'_>, target_pe: f64) -> PyResult<PyClassicalOptimum> {
        let o = py.detach(|| classical::optimize_scheme(&self.0, target_pe)).py()?;
        Ok(PyClassicalOptimum {
            snr: o.snr,
            size: o.size,
            size_rounded: o.size_rounded,
            decode_power: o.decode_power,
            total_power: o.total_power,
        })
    }

    /// Relative mismatch of the decoding/transmit balance at an optimum,
    /// for schemes that have one.
    fn balance_residual(&self, py: Python<'_>, target_pe: f64) -> PyResult<Option<f64>> {
        let o = py.detach(|| classical::optimize_scheme(&self.0, target_pe)).py()?;
        Ok(classical::balance_residual(&self.0, &o))
    }
}

#[pyfunction]
fn binary_entropy(x: f64) -> PyResult<f64> {
    numerics::binary_entropy(x).py()
}

#[pyfunction]
fn binary_entropy_inv(y: f64) -> PyResult<f64> {
    numerics::binary_entropy_inv(y).py()
}

#[pyfunction]
fn kl_bernoulli(g: f64, p: f64) -> PyResult<f64> {
    numerics::kl_bernoulli(g, p).py()
}

#[pyfunction]
fn kl_gaussian_var(var_g: f64, var_p: f64) -> PyResult<f64> {
    numerics::kl_gaussian_var(var_g, var_p).py()
}

#[pyfunction]
fn q_function(x: f64) -> f64 {
    numerics::q_function(x)
}

#[pyfunction]
fn q_inverse(p: f64) -> PyResult<f64> {
    numerics::q_inverse(p).py()
}

#[pyfunction]
fn lambert_w_lower(x: f64) -> PyResult<f64> {
    numerics::lambert_w_lower(x).py()
}

#[pyfunction]
fn chernoff_k(g: f64) -> PyResult<f64> {
    numerics::chernoff_k(g).py()
}

#[pyfunction]
fn error_exponent_random(rate: f64, p: f64) -> PyResult<f64> {
    Ok(numerics::error_exponent_random(rate, p).py()?.bits)
}

#[pyfunction]
fn error_exponent_sphere(rate: f64, p: f64) -> PyResult<f64> {
    Ok(numerics::error_exponent_sphere(rate, p).py()?.bits)
}

#[pyfunction]
fn crossover_from_snr(snr: f64) -> f64 {
    channels::crossover_from_snr(snr)
}

#[pyfunction]
fn bsc_capacity(p: f64) -> f64 {
    channels::bsc_capacity(p)
}

#[pyfunction]
fn awgn_capacity(snr: f64) -> f64 {
    channels::awgn_capacity(snr)
}

#[pyfunction]
fn min_snr_for_rate(rate: f64, kind: &str) -> PyResult<f64> {
    channels::min_snr_for_rate(rate, parse_kind(kind)?).py()
}

#[pyfunction]
fn shannon_waterfall_snr(rate: f64, pe: f64, kind: &str) -> PyResult<f64> {
    channels::shannon_waterfall_snr(rate, pe, parse_kind(kind)?).py()
}

#[pyfunction]
fn upper_bound_neighborhood(rate: f64, channel: &PyChannel, target_pe: f64) -> PyResult<f64> {
    bounds::upper_bound_neighborhood(rate, &channel.0, target_pe).py()
}

#[pyfunction]
fn asymptotic_transmit_snr(rate: f64, gamma: f64, kind: &str) -> PyResult<f64> {
    optimizer::asymptotic_transmit_snr(rate, gamma, parse_kind(kind)?).py()
}

#[pyfunction]
#[pyo3(signature = (rate, gamma, alpha, kind, capacity_baseline = false))]
fn uncoded_coding_threshold(rate: f64, gamma: f64, alpha: f64, kind: &str, capacity_baseline: bool) -> PyResult<f64> {
    let baseline = if capacity_baseline {
        WaterfallBaseline::Capacity
    } else {
        WaterfallBaseline::RateDistortion
    };
    optimizer::uncoded_coding_threshold(rate, gamma, alpha, parse_kind(kind)?, baseline).py()
}

/// `(rate_distortion_gap, coding_gap)`
#[pyfunction]
fn gap_decomposition(capacity: f64, rate: f64, pe: f64) -> PyResult<(f64, f64)> {
    let s = asym::gap_decomposition(capacity, rate, pe).py()?;
    Ok((s.rate_distortion, s.coding))
}

/// `(gap, target_pe, n)` per gap. With `beta=None` the target balances
/// the two parts of the gap.
#[pyfunction]
#[pyo3(signature = (channel, gaps, beta = Some(1.0), variant = "combined"))]
fn n_vs_gap_curve(
    py: Python<'_>,
    channel: &PyChannel,
    gaps: Vec<f64>,
    beta: Option<f64>,
    variant: &str,
) -> PyResult<Vec<(f64, f64, f64)>> {
    let target = beta.map_or(PeTarget::Balanced, PeTarget::Power);
    let variant = parse_variant(variant)?;
    let curve = py.detach(|| asym::n_vs_gap_curve(target, &channel.0, &gaps, variant));
    Ok(curve.into_iter().map(|p| (p.gap, p.target_pe, p.n)).collect())
}

/// Least-squares slope of `log2 n` against `log2 gap`.
#[pyfunction]
fn fitted_slope(gaps: Vec<f64>, ns: Vec<f64>) -> PyResult<f64> {
    if gaps.len() != ns.len() {
        return Err(PyValueError::new_err("gaps and ns differ in length"));
    }
    let curve: Vec<GapPoint> = gaps
        .into_iter()
        .zip(ns)
        .map(|(gap, n)| GapPoint { gap, target_pe: f64::NAN, n })
        .collect();
    asym::fitted_slope(&curve).py()
}

#[pymodule(name = "waterslide")]
fn waterslide_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("InfeasibleError", m.py().get_type::<InfeasibleError>())?;
    m.add_class::<PyChannel>()?;
    m.add_class::<PyBoundResult>()?;
    m.add_class::<PyNeighborhoodBound>()?;
    m.add_class::<PyTechnologyWeights>()?;
    m.add_class::<PyWaterslidePoint>()?;
    m.add_class::<PyPowerOptimizer>()?;
    m.add_class::<PyClassicalOptimum>()?;
    m.add_class::<PyClassicalScheme>()?;
    m.add_function(wrap_pyfunction!(binary_entropy, m)?)?;
    m.add_function(wrap_pyfunction!(binary_entropy_inv, m)?)?;
    m.add_function(wrap_pyfunction!(kl_bernoulli, m)?)?;
    m.add_function(wrap_pyfunction!(kl_gaussian_var, m)?)?;
    m.add_function(wrap_pyfunction!(q_function, m)?)?;
    m.add_function(wrap_pyfunction!(q_inverse, m)?)?;
    m.add_function(wrap_pyfunction!(lambert_w_lower, m)?)?;
    m.add_function(wrap_pyfunction!(chernoff_k, m)?)?;
    m.add_function(wrap_pyfunction!(error_exponent_random, m)?)?;
    m.add_function(wrap_pyfunction!(error_exponent_sphere, m)?)?;
    m.add_function(wrap_pyfunction!(crossover_from_snr, m)?)?;
    m.add_function(wrap_pyfunction!(bsc_capacity, m)?)?;
    m.add_function(wrap_pyfunction!(awgn_capacity, m)?)?;
    m.add_function(wrap_pyfunction!(min_snr_for_rate, m)?)?;
    m.add_function(wrap_pyfunction!(shannon_waterfall_snr, m)?)?;
    m.add_function(wrap_pyfunction!(upper_bound_neighborhood, m)?)?;
    m.add_function(wrap_pyfunction!(asymptotic_transmit_snr, m)?)?;
    m.add_function(wrap_pyfunction!(uncoded_coding_threshold, m)?)?;
    m.add_function(wrap_pyfunction!(gap_decomposition, m)?)?;
    m.add_function(wrap_pyfunction!(n_vs_gap_curve, m)?)?;
    m.add_function(wrap_pyfunction!(fitted_slope, m)?)?;
    Ok(())
}
