//! Verification suites behind `gammaratio verify`.

use num_complex::Complex;
use num_rational::BigRational;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use gammaratio::gammaexp::{c_coefficients, GammaRatioSpec};
use gammaratio::identities::{verify_connection, verify_double_gf, verify_horizontal_gf, verify_identity_one, verify_identity_two, verify_vertical_gf, IdentityCheck};
use gammaratio::numerics::{fmt_gauss, fmt_rational, GaussRational, RatPoly};
use gammaratio::series::ExpRoute;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Identities,
    Genfun,
    Routes,
    All,
}

/// Highest index of the identity and generating-function checks.
pub const IDENTITY_MAX: usize = 10;
pub const HORIZONTAL_MAX: usize = 12;
pub const VERTICAL_COLUMNS: usize = 4;
pub const VERTICAL_ORDER: usize = 10;
pub const DOUBLE_MAX: usize = 8;
pub const ROUTE_ORDER: usize = 8;
pub const ROUTE_SPECS: usize = 5;
const ROUTE_SEED: u64 = 0x6a6d_7261;

fn residual_terms(p: &RatPoly) -> Vec<String> {
    p.terms()
        .map(|(exps, c)| {
            let mut s = fmt_rational(c);
            for (sym, e) in p.symbols().iter().zip(exps) {
                match e {
                    0 => {}
                    1 => s.push_str(&format!("*{sym}")),
                    _ => s.push_str(&format!("*{sym}^{e}")),
                }
            }
            s
        })
        .collect()
}

fn case(identity: &str, index: Value, check: &IdentityCheck) -> (bool, Value) {
    let mut v = json!({
        "identity": identity,
        "holds": check.holds,
        "residual_terms": residual_terms(&check.residual),
    });
    if let (Value::Object(m), Value::Object(idx)) = (&mut v, index) {
        m.extend(idx);
    }
    (check.holds, v)
}

fn summarize(cases: Vec<(bool, Value)>) -> Value {
    let pass = cases.iter().all(|(ok, _)| *ok);
    let failures = cases.iter().filter(|(ok, _)| !*ok).count();
    json!({
        "pass": pass,
        "failures": failures,
        "cases": cases.into_iter().map(|(_, v)| v).collect::<Vec<_>>(),
    })
}

pub fn identities_suite() -> Value {
    let mut cases = Vec::new();
    for m in 0..=IDENTITY_MAX {
        cases.push(case("norlund_one", json!({ "m": m }), &verify_identity_one(m)));
        cases.push(case("norlund_two", json!({ "m": m }), &verify_identity_two(m)));
    }
    for n in 0..=IDENTITY_MAX {
        for l in 0..=n {
            cases.push(case("connection", json!({ "n": n, "l": l }), &verify_connection(n, l)));
        }
    }
    summarize(cases)
}

pub fn genfun_suite() -> Value {
    let mut cases = Vec::new();
    for n in 0..=HORIZONTAL_MAX {
        cases.push(case("horizontal", json!({ "n": n }), &verify_horizontal_gf(n)));
    }
    for l in 0..=VERTICAL_COLUMNS {
        cases.push(case("vertical", json!({ "l": l, "order": VERTICAL_ORDER }), &verify_vertical_gf(l, VERTICAL_ORDER)));
    }
    for n in 0..=DOUBLE_MAX {
        cases.push(case("double", json!({ "n": n }), &verify_double_gf(n)));
    }
    summarize(cases)
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Balanced spec with small random rational parameters.
pub fn random_spec(rng: &mut ChaCha8Rng) -> GammaRatioSpec<GaussRational> {
    let p = rng.gen_range(1..=3);
    let qn = rng.gen_range(1..=3);
    let big_a: Vec<BigRational> = (0..p).map(|_| q(rng.gen_range(1..5), rng.gen_range(1..4))).collect();
    let total: BigRational = big_a.iter().cloned().sum();
    let weights: Vec<i64> = (0..qn).map(|_| rng.gen_range(1..6)).collect();
    let wsum: i64 = weights.iter().sum();
    let big_b = weights.iter().map(|w| &total * q(*w, wsum)).collect();
    let param = |rng: &mut ChaCha8Rng| Complex::new(q(rng.gen_range(-12..12), rng.gen_range(1..5)), q(rng.gen_range(-3..4), 2));
    let a = (0..p).map(|_| param(rng)).collect();
    let b = (0..qn).map(|_| param(rng)).collect();
    GammaRatioSpec::new(big_a, a, big_b, b).expect("well-formed random spec")
}

pub fn describe(spec: &GammaRatioSpec<GaussRational>) -> String {
    let side = |scales: &[BigRational], shifts: &[GaussRational]| {
        scales
            .iter()
            .zip(shifts)
            .map(|(s, a)| {
                let shift = fmt_gauss(a);
                let sign = if shift.starts_with('-') { "" } else { "+" };
                format!("Gamma({} z {}{})", fmt_rational(s), sign, shift)
            })
            .collect::<Vec<_>>()
            .join(" ")
    };
    format!("{} / {}", side(spec.big_a(), spec.a()), side(spec.big_b(), spec.b()))
}

pub fn routes_suite() -> Value {
    let mut rng = ChaCha8Rng::seed_from_u64(ROUTE_SEED);
    let fixtures = [
        GammaRatioSpec::new(vec![q(1, 1)], vec![Complex::new(q(0, 1), q(0, 1))], vec![q(1, 1)], vec![Complex::new(q(1, 1), q(0, 1))]).unwrap(),
        GammaRatioSpec::new(
            vec![q(1, 1), q(1, 1)],
            vec![Complex::new(q(0, 1), q(0, 1)); 2],
            vec![q(1, 1), q(1, 1)],
            vec![Complex::new(q(1, 2), q(0, 1)); 2],
        )
        .unwrap(),
    ];
    let specs: Vec<_> = fixtures.into_iter().chain((0..ROUTE_SPECS).map(|_| random_spec(&mut rng))).collect();
    let mut cases = Vec::new();
    for spec in &specs {
        let rec = c_coefficients(spec, ROUTE_ORDER, ExpRoute::Recurrence);
        let ok = match &rec {
            Ok(r) => [ExpRoute::Partition, ExpRoute::Nair].iter().all(|&route| c_coefficients(spec, ROUTE_ORDER, route).as_ref() == Ok(r)),
            Err(_) => false,
        };
        let largest = rec
            .as_ref()
            .ok()
            .and_then(|c| c.iter().map(|x| x.re.abs().max(x.im.abs())).max())
            .map(|m| fmt_rational(&m));
        cases.push((
            ok,
            json!({
                "identity": "routes",
                "spec": describe(spec),
                "order": ROUTE_ORDER,
                "routes": ExpRoute::ALL.iter().map(|r| r.name()).collect::<Vec<_>>(),
                "holds": ok,
                "largest_coefficient": largest,
            }),
        ));
    }
    summarize(cases)
}

/// Runs the requested suites; the flag is true when everything passed.
pub fn run(suite: Suite) -> (bool, Value) {
    let mut suites = serde_json::Map::new();
    if matches!(suite, Suite::Identities | Suite::All) {
        suites.insert("identities".into(), identities_suite());
    }
    if matches!(suite, Suite::Genfun | Suite::All) {
        suites.insert("genfun".into(), genfun_suite());
    }
    if matches!(suite, Suite::Routes | Suite::All) {
        suites.insert("routes".into(), routes_suite());
    }
    let all_pass = suites.values().all(|s| s["pass"] == Value::Bool(true));
    (all_pass, json!({ "all_pass": all_pass, "suites": suites }))
}
