use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use ordo_core::classical::*;
use ordo_core::error::Error;
use ordo_core::kernels::{QFunction, SymbolFunction};
use proptest::prelude::*;

fn harmonic(m: f64, w: f64) -> HamiltonianSpec {
    HamiltonianSpec::new(m, Potential::Harmonic { omega: w, mass: m }).unwrap()
}

fn spec(v: Potential) -> HamiltonianSpec {
    HamiltonianSpec::new(1.0, v).unwrap()
}

fn magnetic(u: Vec<f64>, v: Potential) -> HamiltonianSpec {
    HamiltonianSpec::with_magnetic(1.0, Some(MagneticTerm::new(u)), v).unwrap()
}

fn catalog() -> Vec<HamiltonianSpec> {
    vec![
        spec(Potential::Free),
        spec(Potential::Linear { force: 2.0 }),
        harmonic(1.0, 1.0),
        HamiltonianSpec::new(2.0, Potential::Harmonic { omega: 1.3, mass: 2.0 }).unwrap(),
        spec(Potential::Quartic { lambda: 0.1 }),
        spec(Potential::Polynomial(Poly(vec![0.2, -0.4, 0.5, 0.1]))),
        spec(Potential::Gaussian { v0: 1.0, width: 0.5 }),
    ]
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let (lx, ly): (Vec<f64>, Vec<f64>) = xs.iter().zip(ys).map(|(x, y)| (x.ln(), y.ln())).unzip();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

// ---------- potentials ----------

#[test]
fn potential_derivatives_match_finite_differences() {
    let probes = [-1.3, -0.2, 0.0, 0.45, 1.7];
    for h in catalog() {
        let v = &h.v;
        for &q in &probes {
            let e = 1e-4;
            let fd1 = (v.v(q + e) - v.v(q - e)) / (2.0 * e);
            let fd2 = (v.dv(q + e) - v.dv(q - e)) / (2.0 * e);
            let fd3 = (v.d2v(q + e) - v.d2v(q - e)) / (2.0 * e);
            let tol = |x: f64| 1e-6 * x.abs().max(1.0);
            assert!((v.dv(q) - fd1).abs() <= tol(fd1), "{v} V' at {q}");
            assert!((v.d2v(q) - fd2).abs() <= tol(fd2), "{v} V'' at {q}");
            assert!((v.derivative(q, 3) - fd3).abs() <= tol(fd3), "{v} V''' at {q}");
        }
    }
    let u = MagneticTerm::new(vec![0.1, 0.3, -0.2]);
    for &q in &probes {
        let e = 1e-4;
        assert!((u.du0(q) - (u.u0(q + e) - u.u0(q - e)) / (2.0 * e)).abs() < 1e-6);
        assert!((u.d2u0(q) - (u.du0(q + e) - u.du0(q - e)) / (2.0 * e)).abs() < 1e-6);
    }
}

#[test]
fn potential_text_round_trip() {
    for s in ["free", "linear:F=2", "harmonic:omega=1", "quartic:lambda=0.1", "poly:1,0,0.5", "gauss:V0=1,w=0.5"] {
        let v = Potential::parse(s, 1.0).unwrap();
        assert_eq!(v.to_string(), s);
        assert_eq!(Potential::parse(&v.to_string(), 1.0).unwrap(), v);
    }
    assert_eq!(Potential::parse("linear:F=2.0", 1.0).unwrap(), Potential::Linear { force: 2.0 });
    assert!(Potential::parse("harmonic:omega=1,spin=2", 1.0).is_err());
    assert!(Potential::parse("cubic:a=1", 1.0).is_err());
    assert!(Potential::parse("poly:1,x", 1.0).is_err());
    let u = MagneticTerm::parse("u0=poly:0,0.3").unwrap();
    assert_eq!(u.poly.0, vec![0.0, 0.3]);
    assert_eq!(MagneticTerm::parse(&u.to_string()).unwrap(), u);
}

#[test]
fn path_average_examples() {
    let (a, b) = (0.7, -1.9);
    let q = Poly(vec![0.0, 1.0]);
    assert!((path_average(&q, a, b) - (a + b) / 2.0).abs() < 1e-15);
    let q2 = Poly(vec![0.0, 0.0, 1.0]);
    assert!((path_average(&q2, a, b) - (a * a + a * b + b * b) / 3.0).abs() < 1e-15);
    let g = Potential::Gaussian { v0: 1.0, width: 0.5 };
    assert_eq!(path_average(&g, a, a), g.v(a));
    assert_eq!(path_average(&Poly(vec![1.0, 2.0, 3.0]), a, a), 1.0 + 2.0 * a + 3.0 * a * a);
    // Gauss-Legendre on the non-polynomial member against a fine Simpson rule
    let n = 4000;
    let f: Vec<f64> = (0..=n).map(|i| g.v(a + (b - a) * i as f64 / n as f64)).collect();
    let simpson = ordo_core::numeric::quadrature::simpson(&f, 1.0 / n as f64);
    assert!((path_average(&g, a, b) - simpson).abs() < 1e-12);
}

// ---------- flows ----------

#[test]
fn hamilton_rhs_examples() {
    assert_eq!(hamilton_rhs(&spec(Potential::Free), 0.3, 1.5), (1.5, 0.0));
    let (dq, dp) = hamilton_rhs(&spec(Potential::Linear { force: 2.0 }), 0.3, 1.5);
    assert_eq!((dq, dp), (1.5, 2.0));
    let h = harmonic(2.0, 3.0);
    let (dq, dp) = hamilton_rhs(&h, 0.5, 4.0);
    assert!((dq - 2.0).abs() < 1e-15 && (dp + 2.0 * 9.0 * 0.5).abs() < 1e-12);
    let hm = magnetic(vec![0.2, 0.5], Potential::Free);
    let (dq, dp) = hamilton_rhs(&hm, 1.0, 2.0);
    assert!((dq - (2.0 + 0.7)).abs() < 1e-15 && (dp + 0.5 * 2.0).abs() < 1e-15);
}

#[test]
fn ivp_free_and_zero_duration() {
    let h = spec(Potential::Free);
    let path = integrate_ivp(&h, 0.2, 1.3 / 0.4, 0.4, 64).unwrap();
    assert!((path.q_end() - 1.5).abs() < 1e-13);
    let z = integrate_ivp(&harmonic(1.0, 1.0), 0.2, 3.0, 0.0, 64).unwrap();
    assert_eq!(z.q, vec![0.2]);
    let z = integrate_ivp(&harmonic(1.0, 1.0), 0.2, 3.0, 0.5, 0).unwrap();
    assert_eq!(z.q_end(), 0.2);
}

#[test]
fn ivp_harmonic_matches_exact_solution() {
    let (qa, pa, w) = (0.4, -0.9, 1.0);
    for eps in [0.1, 0.3, 0.5] {
        let path = integrate_ivp(&harmonic(1.0, w), qa, pa, eps, 256).unwrap();
        let exact = qa * (w * eps).cos() + pa / w * (w * eps).sin();
        assert!((path.q_end() - exact).abs() < 1e-10, "eps={eps}");
    }
}

#[test]
fn ivp_is_fourth_order() {
    let (qa, pa, w, eps): (f64, f64, f64, f64) = (0.4, -0.9, 1.0, 3.0);
    let exact = qa * (w * eps).cos() + pa / w * (w * eps).sin();
    let ns = [16usize, 32, 64, 128];
    let errs: Vec<f64> = ns.iter().map(|&n| (integrate_ivp(&harmonic(1.0, w), qa, pa, eps, n).unwrap().q_end() - exact).abs()).collect();
    let s = slope(&ns.map(|n| n as f64), &errs);
    assert!((s + 4.0).abs() < 0.3, "slope {s}, errors {errs:?}");
}

#[test]
fn bvp_examples() {
    let (qa, qb, f) = (0.3, 1.1, 2.0);
    for eps in [1e-3, 0.05, 0.5] {
        let p = solve_bvp(&spec(Potential::Linear { force: f }), qa, qb, eps, 1e-12).unwrap();
        let want = (qb - qa) / eps - 0.5 * f * eps;
        assert!((p.p_a() - want).abs() <= 1e-10 * want.abs(), "eps={eps}: {} vs {want}", p.p_a());
        assert!((p.q_end() - qb).abs() <= 1e-12);
        assert_eq!(p.q[0], qa);
        assert!(p.tau.windows(2).all(|w| w[1] > w[0]));
    }
    let free = solve_bvp(&spec(Potential::Free), qa, qb, 0.2, 1e-12).unwrap();
    assert_eq!(free.iterations, 1);
    assert!((free.p_a() - (qb - qa) / 0.2).abs() < 1e-12);
    let e = solve_bvp(&harmonic(1.0, 1.0), 0.0, 1.0, std::f64::consts::PI, 1e-12).unwrap_err();
    assert!(matches!(e, Error::ConjugatePoint { .. }), "{e:?}");
    // coinciding endpoints are allowed for the BVP
    let rest = solve_bvp(&harmonic(1.0, 1.0), 0.5, 0.5, 0.3, 1e-12).unwrap();
    assert!((rest.q_end() - 0.5).abs() < 1e-12);
}

#[test]
fn bvp_harmonic_matches_exact_momentum() {
    let (qa, qb, w) = (0.3, 1.1, 1.0);
    for eps in [1e-3, 0.1, 1.0, 2.5] {
        let p = solve_bvp(&harmonic(1.0, w), qa, qb, eps, 1e-12).unwrap();
        let want = w * (qb - qa * (w * eps).cos()) / (w * eps).sin();
        assert!(rel(p.p_a(), want) < 1e-9, "eps={eps}");
    }
}

#[test]
fn action_along_matches_closed_forms() {
    let (qa, qb) = (0.3, 1.1);
    for eps in [1e-3, 1e-2, 0.1] {
        let s = action_along(&solve_bvp(&spec(Potential::Free), qa, qb, eps, 1e-12).unwrap(), &spec(Potential::Free));
        assert!(rel(s, exact_action(ExactKind::Free, 1.0, qa, qb, eps).unwrap()) < 1e-10);
        let hl = spec(Potential::Linear { force: 2.0 });
        let s = action_along(&solve_bvp(&hl, qa, qb, eps, 1e-12).unwrap(), &hl);
        assert!(rel(s, exact_action(ExactKind::Linear { force: 2.0 }, 1.0, qa, qb, eps).unwrap()) < 1e-8);
        let hh = harmonic(1.0, 1.0);
        let s = action_along(&solve_bvp(&hh, qa, qb, eps, 1e-12).unwrap(), &hh);
        assert!(rel(s, exact_action(ExactKind::Harmonic { omega: 1.0 }, 1.0, qa, qb, eps).unwrap()) < 1e-8);
    }
}

#[test]
fn exact_action_examples() {
    assert_eq!(exact_action(ExactKind::Free, 1.0, 0.0, 1.0, 0.5).unwrap(), 1.0);
    let free = exact_action(ExactKind::Free, 1.3, 0.2, -0.7, 0.9).unwrap();
    assert_eq!(exact_action(ExactKind::Linear { force: 0.0 }, 1.3, 0.2, -0.7, 0.9).unwrap(), free);
    let near = exact_action(ExactKind::Harmonic { omega: 1e-5 }, 1.3, 0.2, -0.7, 0.9).unwrap();
    assert!(rel(near, free) < 1e-9);
    assert!(matches!(exact_action(ExactKind::Harmonic { omega: 1.0 }, 1.0, 0.0, 1.0, std::f64::consts::PI), Err(Error::ConjugatePoint { .. })));
}

/// Laurent coefficients x^{-1}, x, x³, x⁵ of cot x and csc x, by exact division of the sine and cosine series.
fn cot_csc_series() -> ([BigRational; 4], [BigRational; 4]) {
    let terms = 8;
    let fact = |k: u64| -> BigInt { (1..=k).map(BigInt::from).product() };
    // sin x / x and cos x as series in x²
    let s: Vec<BigRational> = (0..terms).map(|k| BigRational::new(BigInt::from(if k % 2 == 0 { 1 } else { -1 }), fact(2 * k as u64 + 1))).collect();
    let c: Vec<BigRational> = (0..terms).map(|k| BigRational::new(BigInt::from(if k % 2 == 0 { 1 } else { -1 }), fact(2 * k as u64))).collect();
    // 1/(sin x / x) in x²
    let mut inv = vec![BigRational::zero(); terms];
    inv[0] = BigRational::one();
    for k in 1..terms {
        let mut acc = BigRational::zero();
        for j in 1..=k {
            acc += &s[j] * &inv[k - j];
        }
        inv[k] = -acc;
    }
    let mut cot = vec![BigRational::zero(); terms];
    for k in 0..terms {
        for j in 0..=k {
            cot[k] += &c[j] * &inv[k - j];
        }
    }
    // x·cot x = Σ cot[k] x^{2k}, x·csc x = Σ inv[k] x^{2k}
    (
        [cot[0].clone(), cot[1].clone(), cot[2].clone(), cot[3].clone()],
        [inv[0].clone(), inv[1].clone(), inv[2].clone(), inv[3].clone()],
    )
}

#[test]
fn oscillator_taylor_coefficients_match_rational_series() {
    let (cot, csc) = cot_csc_series();
    let q = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
    assert_eq!(cot[1], q(-1, 3));
    assert_eq!(cot[2], q(-1, 45));
    assert_eq!(csc[3], q(31, 15120));
    for &(m, w, qa, qb) in &[(1.0, 1.0, 0.0, 1.0), (1.0, 1.0, 0.3, 1.1), (2.0, 1.7, -0.4, 0.9)] {
        let a = qa * qa + qb * qb;
        let b = qa * qb;
        // S = (mω/2)(a cot x − 2b csc x), x = ωε; εᵏ coefficient k = 2j − 1
        let got = harmonic_action_taylor(m, w, qa, qb);
        for j in 0..4 {
            let oracle = 0.5 * m * w * w.powi(2 * j as i32 - 1) * (a * cot[j].to_f64().unwrap() - 2.0 * b * csc[j].to_f64().unwrap());
            assert!((got[j] - oracle).abs() < 1e-14 * oracle.abs().max(1.0), "j={j}: {} vs {oracle}", got[j]);
        }
        let c5_printed = -m * w.powi(6) / 30240.0 * (32.0 * a + 31.0 * 2.0 * b);
        assert!((got[3] - c5_printed).abs() < 1e-15);
    }
}

// ---------- secular profiles ----------

#[test]
fn secular_linear_example() {
    let (qa, qb, f) = (0.3, 1.1, 2.0);
    let p = secular_profiles(&spec(Potential::Linear { force: f }), qa, qb).unwrap();
    assert_eq!(p.pi_minus1, qb - qa);
    for i in 0..=20 {
        let t = i as f64 / 20.0;
        assert!((p.pi(1).eval(t) - f * (t - 0.5)).abs() < 1e-13);
        assert!((p.chi(2).eval(t) + f / 2.0 * (t - t * t)).abs() < 1e-13);
        for c in [p.pi(0), p.pi(2), p.pi(3), p.chi(1), p.chi(3), p.chi(4)] {
            assert!(c.eval(t).abs() < 1e-13);
        }
    }
}

#[test]
fn secular_harmonic_examples() {
    let (qa, qb, w, m) = (0.3, 1.1, 1.3, 2.0);
    let p = secular_profiles(&harmonic(m, w), qa, qb).unwrap();
    for i in 0..=40 {
        let t = i as f64 / 40.0;
        let pi1 = m * w * w * ((2.0 * qa + qb) / 6.0 - qa * t - (qb - qa) * t * t / 2.0);
        assert!((p.pi(1).eval(t) - pi1).abs() < 1e-12);
        assert!((p.chi(2).eval(t) - chi2_osc_derived(w, qa, qb, t)).abs() < 1e-12);
    }
    // the printed χ₂ differs from the derived one away from the endpoints
    assert!((chi2_osc_printed(w, qa, qb, 0.5) - chi2_osc_derived(w, qa, qb, 0.5)).abs() > 1e-2);
}

/// χ₂ from the exact oscillator path by two-level Richardson extrapolation of (q − q⃗)/ε².
#[test]
fn harmonic_chi2_matches_exact_solution_expansion() {
    let (qa, qb, w) = (0.3, 1.1, 1.0);
    let exact = |eps: f64, t: f64| (qa * (w * eps * (1.0 - t)).sin() + qb * (w * eps * t).sin()) / (w * eps).sin();
    let p = secular_profiles(&harmonic(1.0, w), qa, qb).unwrap();
    let e = 0.02;
    for i in 0..=16 {
        let t = i as f64 / 16.0;
        let lin = (1.0 - t) * qa + t * qb;
        let f = |eps: f64| (exact(eps, t) - lin) / (eps * eps);
        let r1 = (4.0 * f(e / 2.0) - f(e)) / 3.0;
        let r2 = (4.0 * f(e / 4.0) - f(e / 2.0)) / 3.0;
        let chi2 = (16.0 * r2 - r1) / 15.0;
        assert!((p.chi(2).eval(t) - chi2).abs() < 1e-10, "t={t}: {} vs {chi2}", p.chi(2).eval(t));
    }
}

#[test]
fn secular_invariants_on_catalog() {
    for (qa, qb) in [(0.3, 1.1), (-0.8, 0.5), (1.2, -0.4)] {
        for h in catalog() {
            let p = secular_profiles(&h, qa, qb).unwrap();
            assert!((p.pi_minus1 - h.mass * (qb - qa)).abs() < 1e-15);
            for n in 0..=3 {
                assert!(p.pi(n).mean().abs() < 1e-10, "{} pi{n} mean {}", h.v, p.pi(n).mean());
            }
            for n in [2, 4] {
                assert!(p.chi(n).eval(0.0).abs() < 1e-12 && p.chi(n).eval(1.0).abs() < 1e-10, "{} chi{n}", h.v);
            }
            let gone = p.vanishing();
            for name in ["pi0", "pi2", "chi1", "chi3"] {
                assert!(gone.contains(&name), "{} {name}", h.v);
            }
        }
    }
}

#[test]
fn secular_chi4_endpoint_is_not_imposed() {
    // χ₄ is an antiderivative from 0; its value at 1 is m⁻¹∫π₃, which the zero-mean constant sets to 0.
    let h = spec(Potential::Quartic { lambda: 0.3 });
    let p = secular_profiles(&h, -0.2, 1.4).unwrap();
    assert!(p.pi(3).max_abs() > 1e-3);
    assert!((p.chi(4).eval(1.0) - p.pi(3).mean() / h.mass).abs() < 1e-14);
}

#[test]
fn secular_path_tracks_exact_path_to_fourth_order() {
    let (qa, qb) = (0.3, 1.1);
    let h = harmonic(1.0, 1.0);
    let p = secular_profiles(&h, qa, qb).unwrap();
    let eps = [0.4, 0.2, 0.1, 0.05];
    let errs: Vec<f64> = eps
        .iter()
        .map(|&e| {
            let path = solve_bvp_with(&h, qa, qb, e, BvpOptions { tol: 1e-14, n_steps: 512 }).unwrap();
            path.tau.iter().zip(&path.q).map(|(&t, &q)| (q - p.q_approx(e, 2, t)).abs()).fold(0.0, f64::max)
        })
        .collect();
    let s = slope(&eps, &errs);
    assert!((s - 4.0).abs() < 0.2, "slope {s}, errors {errs:?}");
}

#[test]
fn secular_degenerate_endpoints() {
    assert!(matches!(secular_profiles(&harmonic(1.0, 1.0), 0.5, 0.5), Err(Error::DegenerateEndpoints(_))));
    assert!(matches!(action_series(&harmonic(1.0, 1.0), 0.5, 0.5), Err(Error::DegenerateEndpoints(_))));
}

#[test]
fn pi3_printed_form_disagrees_with_ode() {
    let h = harmonic(1.0, 1.0);
    let p = secular_profiles(&h, 0.0, 1.0).unwrap();
    let dev = (0..=20).map(|i| i as f64 / 20.0).map(|t| (pi3_printed(&h, 0.0, 1.0, t) - p.pi(3).eval(t)).abs()).fold(0.0, f64::max);
    assert!(dev > 0.1, "{dev}");
    // for linear V both vanish
    let hl = spec(Potential::Linear { force: 2.0 });
    assert!(pi3_printed(&hl, 0.0, 1.0, 0.3).abs() < 1e-14);
}

// Magnetic profiles against the gauge-transformed problem: with p′ = p + m u₀(q), the path is that of
// V_eff = V − m u₀²/2 without u₀, and πₙ = π′ₙ − m[u₀(q̃)]ₙ.
#[test]
fn magnetic_profiles_follow_gauge_transformation() {
    let (qa, qb) = (0.3, 1.1);
    let u = vec![0.1, 0.3, -0.2];
    let v = Potential::Harmonic { omega: 1.0, mass: 1.0 };
    let h = magnetic(u.clone(), v.clone());
    let up = Poly(u.clone());
    let veff = {
        let mut c = v.as_poly().unwrap().0;
        let u2 = up.mul(&up);
        c.resize(u2.0.len().max(c.len()), 0.0);
        for (i, x) in u2.0.iter().enumerate() {
            c[i] -= 0.5 * x;
        }
        Potential::Polynomial(Poly(c))
    };
    let p = secular_profiles(&h, qa, qb).unwrap();
    let pe = secular_profiles(&spec(veff), qa, qb).unwrap();
    for i in 0..=20 {
        let t = i as f64 / 20.0;
        let ql = (1.0 - t) * qa + t * qb;
        assert!((p.pi(0).eval(t) + up.eval(ql)).abs() < 1e-12);
        assert!((p.pi(1).eval(t) - pe.pi(1).eval(t)).abs() < 1e-12);
        assert!((p.chi(2).eval(t) - pe.chi(2).eval(t)).abs() < 1e-12);
        let pi2 = -up.derivative().eval(ql) * pe.chi(2).eval(t);
        assert!((p.pi(2).eval(t) - pi2).abs() < 1e-12, "t={t}");
        assert!(p.chi(1).eval(t).abs() < 1e-13 && p.chi(3).eval(t).abs() < 1e-12);
    }
    // the printed forms: π₂ = −m u₀′(q⃗) and π₁ with m u₀² (not m u₀²/2)
    let dev2 = (0..=20).map(|i| i as f64 / 20.0).map(|t| (magnetic_pi2_printed(&h, qa, qb, t) - p.pi(2).eval(t)).abs()).fold(0.0, f64::max);
    assert!(dev2 > 0.1);
    let dev1 = (0..=20).map(|i| i as f64 / 20.0).map(|t| (magnetic_pi1_printed(&h, qa, qb, t) - p.pi(1).eval(t)).abs()).fold(0.0, f64::max);
    assert!(dev1 > 1e-3);
}

// ---------- series ----------

#[test]
fn action_series_linear() {
    let (qa, qb, f) = (0.3, 1.1, 2.0);
    let s = action_series(&spec(Potential::Linear { force: f }), qa, qb).unwrap();
    assert!((s.c_minus1 - 0.5 * (qb - qa).powi(2)).abs() < 1e-15);
    assert!((s.c1 - f * (qa + qb) / 2.0).abs() < 1e-14);
    assert!((s.c3.unwrap() + f * f / 24.0).abs() < 1e-14);
    assert!(s.c5.unwrap().abs() < 1e-14);
    assert_eq!((s.c0, s.c2), (0.0, 0.0));
    assert_eq!(s.provenance["c5"], DESIGNATED_C5_ROUTE.label());
}

#[test]
fn action_series_harmonic_matches_taylor() {
    for &(m, w, qa, qb) in &[(1.0, 1.0, 0.0, 1.0), (1.0, 1.0, 0.3, 1.1), (2.0, 1.7, -0.4, 0.9)] {
        let s = action_series(&harmonic(m, w), qa, qb).unwrap();
        let t = harmonic_action_taylor(m, w, qa, qb);
        assert!(rel(s.c_minus1, t[0]) < 1e-10);
        assert!(rel(s.c1, t[1]) < 1e-10);
        assert!(rel(s.c1, -(m * w * w / 6.0) * (qa * qa + qb * qb + qa * qb)) < 1e-14);
        assert!(rel(s.c3.unwrap(), t[2]) < 1e-10);
        assert!(rel(s.c5.unwrap(), t[3]) < 1e-6);
    }
}

#[test]
fn constant_u0_gives_zero_c2_on_polynomial_catalog() {
    for v in [Potential::Free, Potential::Linear { force: 2.0 }, Potential::Harmonic { omega: 1.0, mass: 1.0 }, Potential::Quartic { lambda: 0.1 }, Potential::Polynomial(Poly(vec![0.2, -0.4, 0.5, 0.1]))] {
        for u in [0.4, -1.3] {
            let s = action_series(&magnetic(vec![u], v.clone()), 0.3, 1.1).unwrap();
            assert!(s.c2.abs() < 1e-13, "{v}: {}", s.c2);
            assert!((s.c0 + 0.8 * u).abs() < 1e-14);
        }
    }
}

#[test]
fn c5_candidates_examples() {
    for h in [spec(Potential::Free), spec(Potential::Linear { force: 2.0 })] {
        let c = c5_candidates(&h, 0.3, 1.1).unwrap();
        for r in C5Route::ALL {
            assert!(c.get(r).abs() < 1e-13, "{} {}", h.v, r.label());
        }
    }
    assert!(matches!(c5_candidates(&magnetic(vec![0.3], Potential::Free), 0.3, 1.1), Err(Error::MagneticUnsupported(_))));
}

#[test]
fn c5_adjudication_selects_one_route() {
    for &(m, w, qa, qb) in &[(1.0, 1.0, 0.0, 1.0), (1.0, 1.0, 0.3, 1.1), (2.0, 1.7, -0.4, 0.9)] {
        let adj = adjudicate_c5(m, w, qa, qb).unwrap();
        assert_eq!(adj.matching, vec![DESIGNATED_C5_ROUTE]);
        assert!(rel(adj.candidates.designated(), adj.oracle) < 1e-6);
        assert!(adj.rel_dev["printed_closed_form"] > 1e-2);
        assert!(adj.rel_dev["printed_integral"] > 1e-2);
    }
}

#[test]
fn fit_free_has_only_the_kinetic_term() {
    let fit = fit_series_numeric(&spec(Potential::Free), 0.3, 1.1, &log_sweep(1e-3, 1e-1, 12)).unwrap();
    assert!(rel(fit.coeff(-1).unwrap(), 0.32) < 1e-10);
    for k in 0..=5 {
        assert!(fit.at_noise_floor(k), "c{k} = {} floor {:?}", fit.coeff(k).unwrap(), fit.floor(k));
    }
}

#[test]
fn fit_linear_recovers_exact_coefficients() {
    let (qa, qb, f) = (0.3, 1.1, 2.0);
    let fit = fit_series_numeric(&spec(Potential::Linear { force: f }), qa, qb, &log_sweep(1e-3, 1e-1, 12)).unwrap();
    assert!(rel(fit.coeff(1).unwrap(), f * (qa + qb) / 2.0) < 1e-6);
    assert!(rel(fit.coeff(3).unwrap(), -f * f / 24.0) < 1e-6, "{}", fit.coeff(3).unwrap());
    for k in [0, 2, 4, 5] {
        assert!(fit.at_noise_floor(k), "c{k} = {} floor {:?}", fit.coeff(k).unwrap(), fit.floor(k));
    }
}

#[test]
fn fit_matches_formulas_on_catalog() {
    let (qa, qb) = (0.3, 1.1);
    for h in catalog() {
        let s = action_series(&h, qa, qb).unwrap();
        let fit = fit_series_numeric(&h, qa, qb, &log_sweep(1e-3, 1e-1, 12)).unwrap();
        assert!(rel(fit.coeff(-1).unwrap(), s.c_minus1) < 1e-4, "{}", h.v);
        if s.c1.abs() > 1e-12 {
            assert!(rel(fit.coeff(1).unwrap(), s.c1) < 1e-4, "{} c1 {} vs {}", h.v, fit.coeff(1).unwrap(), s.c1);
        }
        let c3 = s.c3.unwrap();
        if c3.abs() > 1e-12 {
            assert!(rel(fit.coeff(3).unwrap(), c3) < 1e-4, "{} c3 {} vs {c3}", h.v, fit.coeff(3).unwrap());
        } else {
            assert!(fit.at_noise_floor(3), "{}", h.v);
        }
    }
}

#[test]
fn fit_quartic_c5_matches_designated_route() {
    let h = spec(Potential::Quartic { lambda: 0.1 });
    let (qa, qb) = (0.3, 1.1);
    let opts = FitOptions { basis: SeriesBasis::Odd, ..FitOptions::default() };
    let fit = fit_series_numeric_with(&h, qa, qb, &log_sweep(1e-2, 0.3, 12), &opts).unwrap();
    let c = c5_candidates(&h, qa, qb).unwrap();
    assert!(rel(fit.coeff(5).unwrap(), c.designated()) < 1e-3);
    assert!(rel(c.printed_closed_form, fit.coeff(5).unwrap()) > 1e-2);
    assert!(rel(c.printed_integral, fit.coeff(5).unwrap()) > 1e-2);
}

#[test]
fn fit_preconditions() {
    let h = harmonic(1.0, 1.0);
    assert!(fit_series_numeric(&h, 0.3, 1.1, &log_sweep(1e-3, 1e-1, 8)).is_err());
    assert!(fit_series_numeric(&h, 0.3, 1.1, &log_sweep(1e-2, 5e-2, 12)).is_err());
    // duplicates do not count as distinct values
    let mut e = log_sweep(1e-3, 1e-1, 8);
    e.extend(e.clone());
    assert!(fit_series_numeric(&h, 0.3, 1.1, &e).is_err());
}

// ---------- classification ----------

#[test]
fn classification_examples() {
    let h = harmonic(1.0, 1.0);
    match classify_hamiltonian(&SymbolFunction::from_hamiltonian(&h)) {
        Classification::Accepted(spec) => assert_eq!(spec, h),
        other => panic!("{other:?}"),
    }
    let mut quartic_p = SymbolFunction::from_hamiltonian(&h);
    quartic_p.coeffs.extend([QFunction::Zero, QFunction::Const(0.1)]);
    assert_eq!(classify_hamiltonian(&quartic_p), Classification::Rejected(RejectReason::PDegree));
    let cubic_p = SymbolFunction::monomial(0, 3);
    assert_eq!(classify_hamiltonian(&cubic_p), Classification::Rejected(RejectReason::PDegree));
    let vm = SymbolFunction::variable_mass(|q| 1.0 + 0.1 * q * q, Potential::Free);
    assert_eq!(classify_hamiltonian(&vm), Classification::Rejected(RejectReason::NonConstantMass));
    let q2p2 = SymbolFunction::monomial(2, 2);
    assert_eq!(classify_hamiltonian(&q2p2), Classification::Rejected(RejectReason::NonConstantMass));
}

#[test]
fn accepted_class_round_trips_through_action_pipeline() {
    let hm = magnetic(vec![0.1, 0.3], Potential::Quartic { lambda: 0.1 });
    for h in catalog().into_iter().chain([hm]) {
        let accepted = match classify_hamiltonian(&SymbolFunction::from_hamiltonian(&h)) {
            Classification::Accepted(s) => s,
            other => panic!("{}: {other:?}", h.v),
        };
        assert_eq!(accepted, h);
        let s0 = numeric_action(&h, 0.3, 1.1, 0.05, BvpOptions::default()).unwrap();
        let s1 = numeric_action(&accepted, 0.3, 1.1, 0.05, BvpOptions::default()).unwrap();
        assert_eq!(s0, s1);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn bvp_hits_endpoint(qa in -1.5f64..1.5, d in 0.1f64..1.5, eps in 1e-3f64..0.5, which in 0usize..7) {
        let h = catalog().swap_remove(which);
        let path = solve_bvp(&h, qa, qa + d, eps, 1e-12).unwrap();
        prop_assert!((path.q_end() - (qa + d)).abs() <= 1e-12);
    }

    #[test]
    fn zero_mean_profiles(qa in -1.5f64..1.5, d in prop_oneof![-1.5f64..-0.1, 0.1f64..1.5], which in 0usize..7) {
        let h = catalog().swap_remove(which);
        let p = secular_profiles(&h, qa, qa + d).unwrap();
        for n in 0..=3 {
            prop_assert!(p.pi(n).mean().abs() < 1e-10);
        }
        prop_assert!(p.chi(4).eval(1.0).abs() < 1e-10);
    }

    #[test]
    fn harmonic_theorem_formulas_match_taylor(m in 0.5f64..3.0, w in 0.2f64..2.0, qa in -1.5f64..1.5, qb in -1.5f64..1.5) {
        prop_assume!((qa - qb).abs() > 0.05);
        let s = action_series(&harmonic(m, w), qa, qb).unwrap();
        let t = harmonic_action_taylor(m, w, qa, qb);
        let scale = m * w.powi(4) * (qa * qa + qb * qb);
        prop_assert!((s.c3.unwrap() - t[2]).abs() <= 1e-10 * scale.max(1e-3));
        prop_assert!((s.c1 - t[1]).abs() <= 1e-12 * (m * w * w * (qa * qa + qb * qb)).max(1e-3));
    }
}
