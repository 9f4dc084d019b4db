//! Expansion and evaluation drivers, generic over exact and float mode.

use num_complex::Complex;
use num_rational::BigRational;
use serde_json::{json, Map, Value};

use gammaratio::facseries::{abscissa, corollary_coeffs_nb, corollary_coeffs_stirling, default_eps_log2, evaluate, theorem_coeffs, AbscissaReport, FactorialSeries, SeriesForm};
use gammaratio::gammaexp::{poincare_expansion, GammaRatioSpec, ScaleFactor};
use gammaratio::numerics::{fmt_rational, ComplexFloat, ComplexScalar, ComplexValue, Float, GaussRational};
use gammaratio::oracle::w_direct;

use crate::error::CliError;
use crate::specfile::ProblemSpec;

/// Scalar type of one arithmetic mode.
pub trait Mode: ComplexScalar {
    const NAME: &'static str;
    fn lift(g: &GaussRational, wp: u32) -> Self;
    fn lift_real(q: &BigRational, wp: u32) -> Self::Real;
}

impl Mode for GaussRational {
    const NAME: &'static str = "exact";
    fn lift(g: &GaussRational, _wp: u32) -> Self {
        g.clone()
    }
    fn lift_real(q: &BigRational, _wp: u32) -> BigRational {
        q.clone()
    }
}

impl Mode for ComplexFloat {
    const NAME: &'static str = "float";
    fn lift(g: &GaussRational, wp: u32) -> Self {
        Complex::new(Float::with_prec(&g.re, wp), Float::with_prec(&g.im, wp))
    }
    fn lift_real(q: &BigRational, wp: u32) -> Float {
        Float::with_prec(q, wp)
    }
}

/// Output precision and working precision. Float mode works at twice the
/// requested precision to absorb cancelation in the coefficient recurrences.
#[derive(Clone, Copy, Debug)]
pub struct Precision {
    pub out: u32,
    pub work: u32,
}

impl Precision {
    pub fn new(bits: u32, float_mode: bool) -> Self {
        Precision { out: bits, work: if float_mode { 2 * bits } else { bits } }
    }

    fn digits(&self) -> usize {
        ((self.out as f64) * core::f64::consts::LOG10_2).floor().max(1.0) as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum HRoute {
    Stirling,
    Nb,
}

/// How to build the factorial series.
#[derive(Clone, Debug)]
pub enum Shape {
    Sigma(GaussRational),
    Theta(GaussRational, HRoute),
}

impl Shape {
    /// `sigma` selects the plain-shift series (needs `mu = 1`), `theta` the
    /// gamma-prefactor one; exactly one must be given.
    pub fn choose(sigma: Option<GaussRational>, theta: Option<GaussRational>, route: HRoute) -> Result<Self, CliError> {
        match (sigma, theta) {
            (Some(s), None) => Ok(Shape::Sigma(s)),
            (None, Some(t)) => Ok(Shape::Theta(t, route)),
            (Some(_), Some(_)) => Err(CliError::spec("give either sigma or theta, not both".into())),
            (None, None) => Err(CliError::spec("--factorial needs sigma (plain shift, mu = 1) or theta (gamma prefactor)".into())),
        }
    }
}

pub fn build_spec<S: Mode>(p: &ProblemSpec, wp: u32) -> Result<GammaRatioSpec<S>, CliError> {
    let spec = GammaRatioSpec::new(
        p.big_a.iter().map(|q| S::lift_real(q, wp)).collect(),
        p.a.iter().map(|g| S::lift(g, wp)).collect(),
        p.big_b.iter().map(|q| S::lift_real(q, wp)).collect(),
        p.b.iter().map(|g| S::lift(g, wp)).collect(),
    )?;
    spec.require_balanced()?;
    Ok(spec)
}

pub fn build_series<S: Mode>(spec: &GammaRatioSpec<S>, shape: &Shape, order: usize, prec: Precision) -> Result<FactorialSeries<S>, CliError> {
    let wp = prec.work;
    Ok(match shape {
        Shape::Sigma(s) => theorem_coeffs(spec, &S::lift(s, wp), order, wp)?,
        Shape::Theta(t, HRoute::Stirling) => corollary_coeffs_stirling(spec, &S::lift(t, wp), order, wp)?,
        Shape::Theta(t, HRoute::Nb) => corollary_coeffs_nb(spec, &S::lift(t, wp), order, wp)?,
    })
}

fn text_of(v: &ComplexValue, prec: Precision) -> (String, String) {
    match v {
        ComplexValue::Exact(g) => (fmt_rational(&g.re), fmt_rational(&g.im)),
        ComplexValue::Float(f) => {
            let r = |x: &Float| x.round_to(prec.out).to_decimal(prec.digits());
            (r(&f.re), r(&f.im))
        }
    }
}

pub fn complex_json(v: &ComplexValue, prec: Precision) -> Value {
    let (re, im) = text_of(v, prec);
    json!({ "re": re, "im": im })
}

fn scalar_json<S: Mode>(x: &S, prec: Precision) -> Value {
    complex_json(&x.clone().into_value(), prec)
}

fn real_json<S: Mode>(r: &S::Real, prec: Precision) -> Value {
    Value::String(text_of(&S::from_real(r).into_value(), prec).0)
}

fn nu_json(nu: &ScaleFactor, prec: Precision) -> Value {
    json!({
        "exact": nu.exact.as_ref().map(|g| complex_json(&ComplexValue::Exact(g.clone()), prec)),
        "value": complex_json(&ComplexValue::Float(nu.value.clone()), prec),
    })
}

pub fn expand_poincare<S: Mode>(spec: &GammaRatioSpec<S>, order: usize, prec: Precision) -> Result<Value, CliError> {
    let pe = poincare_expansion(spec, order, prec.work)?;
    let inv = &pe.invariants;
    let rho = inv.rho_exact.as_ref().map(fmt_rational);
    Ok(json!({
        "kind": "poincare",
        "mode": S::NAME,
        "precision_bits": prec.out,
        "order": order,
        "nu": nu_json(&inv.nu, prec),
        "mu": scalar_json(&inv.mu, prec),
        "rho": rho,
        "log_rho": inv.log_rho.round_to(prec.out).to_decimal(prec.digits()),
        "coeffs": pe.c.iter().map(|c| scalar_json(c, prec)).collect::<Vec<_>>(),
    }))
}

pub fn abscissa_json<S: Mode>(r: &AbscissaReport<S>, prec: Precision) -> Value {
    let alpha = |a: &Option<S::Real>| match a {
        Some(x) => real_json::<S>(x, prec),
        None => Value::String("-inf".into()),
    };
    json!({
        "alpha": alpha(&r.alpha),
        "classification": r.classification.name(),
        "rightmost_pole": r.rightmost_pole.as_ref().map(|p| scalar_json(p, prec)),
        "multiplicity": r.multiplicity,
        "canceled_candidates": r.canceled_candidates.iter().map(|c| scalar_json(c, prec)).collect::<Vec<_>>(),
        "effective_alpha": alpha(&r.effective_alpha),
        "sigma": scalar_json(&r.sigma, prec),
    })
}

pub fn expand_factorial<S: Mode>(spec: &GammaRatioSpec<S>, shape: &Shape, order: usize, prec: Precision) -> Result<Value, CliError> {
    let fs = build_series(spec, shape, order, prec)?;
    let report = abscissa(spec, &fs.form, default_eps_log2(spec))?;
    let mut out = Map::new();
    out.insert("kind".into(), json!("factorial"));
    out.insert("mode".into(), json!(S::NAME));
    out.insert("precision_bits".into(), json!(prec.out));
    out.insert("order".into(), json!(order));
    out.insert("form".into(), json!(fs.form.name()));
    let (key, value, mu) = match &fs.form {
        SeriesForm::PlainShift { sigma } => ("sigma", sigma, spec.mu()),
        SeriesForm::GammaPrefactor { theta, mu } => ("theta", theta, mu.clone()),
    };
    out.insert("sigma_or_theta".into(), json!({ key: scalar_json(value, prec) }));
    if let Shape::Theta(_, route) = shape {
        out.insert("route".into(), json!(if *route == HRoute::Nb { "nb" } else { "stirling" }));
    }
    out.insert("nu".into(), nu_json(&fs.nu, prec));
    out.insert("mu".into(), scalar_json(&mu, prec));
    out.insert("coeffs".into(), Value::Array(fs.coeffs.iter().map(|c| scalar_json(c, prec)).collect()));
    out.insert("abscissa_report".into(), abscissa_json(&report, prec));
    Ok(Value::Object(out))
}

pub const CSV_HEADER: &str = "z_re,z_im,N,partial_sum_re,partial_sum_im,oracle_re,oracle_im,abs_error,rel_error";

fn modulus(z: &ComplexFloat, prec: u32) -> Float {
    let sq = &(&z.re * &z.re) + &(&z.im * &z.im);
    if sq.is_zero() {
        sq
    } else {
        sq.round_to(prec + 8).sqrt(prec)
    }
}

/// CSV rows for one `z`: partial sums against the direct oracle.
pub fn eval_rows<S: Mode>(spec: &GammaRatioSpec<S>, fs: &FactorialSeries<S>, z: &GaussRational, z_decimal: bool, n_list: &[usize], prec: Precision) -> Result<Vec<String>, CliError> {
    let wp = prec.work;
    let zv = if z_decimal { ComplexValue::Float(ComplexFloat::lift(z, wp)) } else { ComplexValue::Exact(z.clone()) };
    let mut sums = Vec::with_capacity(n_list.len());
    for &n in n_list {
        sums.push((n, evaluate(fs, &zv, n, wp)?.value));
    }
    let oracle = w_direct(spec, &zv.to_float(wp + 32), wp)?;
    let oracle_mag = modulus(&oracle, wp);
    let digits = 20;
    let dec = |x: &Float| x.round_to(wp).to_decimal(digits);
    let zf = zv.to_float(wp + 32);
    let mut rows = Vec::with_capacity(sums.len());
    for (n, s) in sums {
        let sf = s.to_float(wp);
        let err = modulus(&(sf.clone() - oracle.clone()), wp);
        let rel = if oracle_mag.is_zero() { err.clone() } else { &err / &oracle_mag };
        rows.push(format!(
            "{},{},{},{},{},{},{},{},{}",
            dec(&zf.re),
            dec(&zf.im),
            n,
            dec(&sf.re),
            dec(&sf.im),
            dec(&oracle.re),
            dec(&oracle.im),
            err.round_to(64).to_decimal(6),
            rel.round_to(64).to_decimal(6),
        ));
    }
    Ok(rows)
}
