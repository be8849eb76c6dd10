use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use ordo_core::opalg::*;
use proptest::prelude::*;

fn r(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn c(n: i64, d: i64) -> CRational {
    CRational::ratio(n, d)
}

fn ci(n: i64, d: i64) -> CRational {
    CRational::new(r(0, 1), r(n, d))
}

/// Σ (a, b, k) → coefficient, built term by term.
fn poly(terms: &[(u32, u32, u32, CRational)]) -> OperatorPoly {
    let mut out = OperatorPoly::zero();
    for (a, b, k, v) in terms {
        out.add_term(*a, *b, &ExactScalar::monomial(*k, v.clone()));
    }
    out
}

// Brute-force oracle: repeatedly rewrite the leftmost "PQ" as "QP − iħ" on whole words,
// with Gaussian-integer coefficients per (word, ħ-power).
fn rewrite_oracle(w: &[Letter]) -> BTreeMap<(u32, u32, u32), (i128, i128)> {
    let mut pending: Vec<(Vec<Letter>, u32, (i128, i128))> = vec![(w.to_vec(), 0, (1, 0))];
    let mut done: BTreeMap<(u32, u32, u32), (i128, i128)> = BTreeMap::new();
    while let Some((word, k, (re, im))) = pending.pop() {
        match word.windows(2).position(|x| x[0] == Letter::P && x[1] == Letter::Q) {
            None => {
                let a = word.iter().filter(|&&l| l == Letter::Q).count() as u32;
                let b = word.len() as u32 - a;
                assert!(word[..a as usize].iter().all(|&l| l == Letter::Q));
                let e = done.entry((a, b, k)).or_insert((0, 0));
                e.0 += re;
                e.1 += im;
            }
            Some(pos) => {
                let mut swapped = word.clone();
                swapped.swap(pos, pos + 1);
                pending.push((swapped, k, (re, im)));
                let mut shorter = word.clone();
                shorter.drain(pos..pos + 2);
                // (re + i im)·(−i) = im − i re
                pending.push((shorter, k + 1, (im, -re)));
            }
        }
    }
    done.retain(|_, v| *v != (0, 0));
    done
}

fn matches_oracle(p: &OperatorPoly, oracle: &BTreeMap<(u32, u32, u32), (i128, i128)>) -> bool {
    let mut seen = 0;
    for ((a, b), s) in p.terms() {
        for (k, v) in s.terms() {
            let Some(&(re, im)) = oracle.get(&(a, b, k)) else { return false };
            let want = CRational::new(BigRational::from_integer(re.into()), BigRational::from_integer(im.into()));
            if *v != want {
                return false;
            }
            seen += 1;
        }
    }
    seen == oracle.len()
}

fn letters(s: &str) -> Vec<Letter> {
    Word::parse(s).unwrap().letters
}

#[test]
fn normal_order_examples() {
    assert_eq!(normal_order(&Word::parse("PQ").unwrap()), poly(&[(1, 1, 0, c(1, 1)), (0, 0, 1, ci(-1, 1))]));
    assert_eq!(normal_order(&Word::parse("QP").unwrap()), poly(&[(1, 1, 0, c(1, 1))]));
    let ppqq = poly(&[(2, 2, 0, c(1, 1)), (1, 1, 1, ci(-4, 1)), (0, 0, 2, c(-2, 1))]);
    assert_eq!(normal_order(&Word::parse("PPQQ").unwrap()), ppqq);
    assert!(normal_order(&Word::new(vec![])) == OperatorPoly::identity());
}

#[test]
fn normal_order_agrees_with_rewriting_on_all_short_words() {
    for len in 0..=7u32 {
        for bits in 0..(1u32 << len) {
            let w: Vec<Letter> = (0..len).map(|i| if bits >> i & 1 == 1 { Letter::P } else { Letter::Q }).collect();
            let got = normal_order(&Word::new(w.clone()));
            assert!(matches_oracle(&got, &rewrite_oracle(&w)), "word {}", Word::new(w));
        }
    }
}

#[test]
fn op_mul_examples() {
    let qp = op_mul(&OperatorPoly::q(), &OperatorPoly::p());
    assert_eq!(qp, poly(&[(1, 1, 0, c(1, 1))]));
    assert_eq!(op_mul(&OperatorPoly::p(), &OperatorPoly::q()), poly(&[(1, 1, 0, c(1, 1)), (0, 0, 1, ci(-1, 1))]));
    assert_eq!(op_mul(&qp, &qp), poly(&[(2, 2, 0, c(1, 1)), (1, 1, 1, ci(-1, 1))]));
    assert!(matches_oracle(&op_mul(&qp, &qp), &rewrite_oracle(&letters("QPQP"))));
}

#[test]
fn commutator_examples() {
    let q = OperatorPoly::q();
    let p = OperatorPoly::p();
    assert_eq!(commutator(&q, &p), poly(&[(0, 0, 1, ci(1, 1))]));
    let q2 = op_mul(&q, &q);
    assert!(commutator(&q, &q2).is_zero());
    let p2 = op_mul(&p, &p);
    // QQPP − PPQQ from the oracle: 4iħ q̂p̂ + 2(iħ)² = 4iħ q̂p̂ − 2ħ²
    assert_eq!(commutator(&q2, &p2), poly(&[(1, 1, 1, ci(4, 1)), (0, 0, 2, c(2, 1))]));
    let mut oracle = rewrite_oracle(&letters("QQPP"));
    for (key, (re, im)) in rewrite_oracle(&letters("PPQQ")) {
        let e = oracle.entry(key).or_insert((0, 0));
        e.0 -= re;
        e.1 -= im;
    }
    oracle.retain(|_, v| *v != (0, 0));
    assert!(matches_oracle(&commutator(&q2, &p2), &oracle));
}

#[test]
fn tau_moment_examples() {
    for rr in 0..=6u32 {
        for m in 0..=rr {
            let binom = BigRational::from_integer(num_integer_binomial(rr, m).into());
            assert_eq!(binom * tau_moment(&TauMeasure::Uniform, m, rr), r(1, rr as i64 + 1));
        }
    }
    // (1−½)¹(½)¹
    assert_eq!(tau_moment(&TauMeasure::weyl(), 1, 2), r(1, 4));
    for p in [TauMeasure::Uniform, TauMeasure::weyl(), TauMeasure::left(), TauMeasure::mixture(vec![(r(1, 3), r(1, 5)), (r(2, 3), r(7, 8))]).unwrap()] {
        assert_eq!(tau_moment(&p, 0, 0), r(1, 1));
    }
}

fn num_integer_binomial(n: u32, k: u32) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

// Symmetrized word sums printed as the Weyl and Born-Jordan forms of q²p².
fn word_average(words: &[&str]) -> OperatorPoly {
    let mut acc = OperatorPoly::zero();
    for w in words {
        acc = acc.add(&normal_order(&Word::parse(w).unwrap()));
    }
    acc.scale(&c(1, words.len() as i64))
}

#[test]
fn quantize_monomial_examples() {
    let six = word_average(&["QQPP", "QPQP", "QPPQ", "PQQP", "PQPQ", "PPQQ"]);
    let weyl = quantize_monomial(2, 2, &TauMeasure::weyl());
    assert_eq!(weyl, six);
    assert_eq!(weyl, poly(&[(2, 2, 0, c(1, 1)), (1, 1, 1, ci(-2, 1)), (0, 0, 2, c(-1, 2))]));

    let three = word_average(&["QQPP", "QPPQ", "PPQQ"]);
    let bj = quantize_monomial(2, 2, &TauMeasure::Uniform);
    assert_eq!(bj, three);
    assert_eq!(bj, poly(&[(2, 2, 0, c(1, 1)), (1, 1, 1, ci(-2, 1)), (0, 0, 2, c(-2, 3))]));

    for p in [TauMeasure::Uniform, TauMeasure::left(), TauMeasure::right()] {
        assert_eq!(quantize_monomial(5, 0, &p), poly(&[(5, 0, 0, c(1, 1))]));
    }
}

#[test]
fn quantize_poly_examples() {
    let konst = PolySymbol::monomial(0, 0, c(7, 3));
    assert_eq!(quantize_poly(&konst, &TauMeasure::Uniform), OperatorPoly::identity().scale(&c(7, 3)));
    let qp = PolySymbol::monomial(1, 1, c(1, 1));
    assert_eq!(quantize_poly(&qp, &TauMeasure::Uniform), poly(&[(1, 1, 0, c(1, 1)), (0, 0, 1, ci(-1, 2))]));
    let p2 = PolySymbol::monomial(0, 2, c(1, 1));
    for p in [TauMeasure::Uniform, TauMeasure::left(), TauMeasure::weyl()] {
        assert_eq!(quantize_poly(&p2, &p), poly(&[(0, 2, 0, c(1, 1))]));
    }
}

#[test]
fn bj_product_rule_examples() {
    assert_eq!(bj_product_rule(0, 0).unwrap(), OperatorPoly::identity());
    for n in 0..=6 {
        for rr in 0..=6 {
            assert_eq!(bj_product_rule(n, rr).unwrap(), quantize_monomial(n, rr, &TauMeasure::Uniform), "n={n} r={rr}");
        }
    }
}

#[test]
fn bj_q_sandwich_matches_uniform_quantization() {
    // 𝓑(qⁿpʳ) = 1/(n+1) Σ_m q̂ᵐ p̂ʳ q̂^{n−m}, here compared for small n, r
    for n in 0..=5 {
        for rr in 0..=5 {
            assert_eq!(bj_q_sandwich(n, rr), quantize_monomial(n, rr, &TauMeasure::Uniform), "n={n} r={rr}");
        }
    }
}

#[test]
fn poisson_bracket_examples() {
    let q = PolySymbol::monomial(1, 0, c(1, 1));
    let p = PolySymbol::monomial(0, 1, c(1, 1));
    assert_eq!(poisson_bracket(&q, &p), PolySymbol::monomial(0, 0, c(1, 1)));
    let q2 = PolySymbol::monomial(2, 0, c(1, 1));
    let p2 = PolySymbol::monomial(0, 2, c(1, 1));
    let b = poisson_bracket(&q2, &p2);
    assert_eq!(b, PolySymbol::monomial(1, 1, c(4, 1)));
    // finite-difference check of ∂q f ∂p g − ∂p f ∂q g
    let h = 1e-5;
    for &(x, y) in &[(0.3, -1.2), (1.7, 0.4), (-2.0, 2.5)] {
        let fq = (x + h) * (x + h) - (x - h) * (x - h);
        let gp = (y + h) * (y + h) - (y - h) * (y - h);
        let fd = fq / (2.0 * h) * gp / (2.0 * h);
        assert!((b.eval(x, y).re - fd).abs() < 1e-6);
    }
    let f = parse_symbol("q^3p^2 - 2qp + p^4").unwrap();
    assert!(poisson_bracket(&f, &f).is_zero());
}

#[test]
fn adjoint_examples() {
    let qp = poly(&[(1, 1, 0, c(1, 1))]);
    assert_eq!(adjoint(&qp), poly(&[(1, 1, 0, c(1, 1)), (0, 0, 1, ci(-1, 1))]));
    let w = quantize_monomial(2, 2, &TauMeasure::weyl());
    assert_eq!(adjoint(&w), w);
    let q3 = poly(&[(3, 0, 0, c(-5, 2))]);
    assert_eq!(adjoint(&q3), q3);
}

#[test]
fn cohen_multiplier_examples() {
    for p in [TauMeasure::Uniform, TauMeasure::left(), TauMeasure::weyl()] {
        assert!((cohen_multiplier(&p, 0.0) - num_complex::Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }
    for u in [-7.0, 0.3, 12.5] {
        assert!((cohen_multiplier(&TauMeasure::weyl(), u) - num_complex::Complex64::new(1.0, 0.0)).norm() < 1e-15);
        let sinc = (u / 2.0f64).sin() / (u / 2.0);
        assert!((cohen_multiplier(&TauMeasure::Uniform, u).re - sinc).abs() < 1e-14);
        assert!(cohen_multiplier(&TauMeasure::Uniform, u).im.abs() < 1e-15);
    }
    assert!((cohen_multiplier(&TauMeasure::Uniform, 1e-9).re - 1.0).abs() < 1e-15);
    // τ-rule: e^{−i(τ−½)u}
    let left = cohen_multiplier(&TauMeasure::left(), 0.8);
    assert!((left - num_complex::Complex64::from_polar(1.0, 0.4)).norm() < 1e-15);
}

#[test]
fn measure_text_round_trip() {
    for s in ["uniform", "tau:1/2", "tau:0", "tau:1", "mix:1/2@1/4,1/2@3/4"] {
        let m = TauMeasure::parse(s).unwrap();
        assert_eq!(TauMeasure::parse(&m.to_string()).unwrap(), m);
    }
    assert_eq!(TauMeasure::parse("bj").unwrap(), TauMeasure::Uniform);
    assert_eq!(TauMeasure::parse("weyl").unwrap(), TauMeasure::weyl());
    assert!(TauMeasure::parse("tau:3/2").is_err());
    assert!(TauMeasure::parse("mix:1/2@0,1/3@1").is_err());
    assert!(TauMeasure::mixture(vec![(r(-1, 2), r(0, 1)), (r(3, 2), r(1, 1))]).is_err());
}

#[test]
fn operator_text_round_trip_on_examples() {
    let bj = quantize_monomial(2, 2, &TauMeasure::Uniform);
    let text = bj.to_string();
    assert!(text.contains("-2/3 * hbar^2"), "{text}");
    assert_eq!(parse_operator_poly(&text).unwrap(), bj);
    assert_eq!(parse_operator_poly("0").unwrap(), OperatorPoly::zero());
    let err = parse_operator_poly("1/2 * q^2 +\n 3 * r").unwrap_err();
    assert_eq!(err.line, 2);
}

fn word_strategy(max: usize) -> impl Strategy<Value = Vec<Letter>> {
    prop::collection::vec(prop_oneof![Just(Letter::Q), Just(Letter::P)], 0..=max)
}

fn measure_strategy() -> impl Strategy<Value = TauMeasure> {
    let atom = (1i64..=8, 0i64..=8).prop_map(|(w, t)| (w, r(t, 8)));
    prop_oneof![
        Just(TauMeasure::Uniform),
        (0i64..=12).prop_map(|t| TauMeasure::point_mass(r(t, 12)).unwrap()),
        prop::collection::vec(atom, 1..4).prop_map(|atoms| {
            let total: i64 = atoms.iter().map(|a| a.0).sum();
            TauMeasure::mixture(atoms.into_iter().map(|(w, t)| (r(w, total), t)).collect()).unwrap()
        }),
    ]
}

/// Measures whose first moment is exactly ½: reflection-symmetrized random measures.
fn mean_half_strategy() -> impl Strategy<Value = TauMeasure> {
    measure_strategy().prop_map(|m| match m {
        TauMeasure::Uniform => TauMeasure::Uniform,
        TauMeasure::PointMass(t) => {
            let half = r(1, 2);
            let s = &r(1, 1) - &t;
            if t == s {
                TauMeasure::PointMass(t)
            } else {
                TauMeasure::mixture(vec![(half.clone(), t), (half, s)]).unwrap()
            }
        }
        TauMeasure::Mixture(atoms) => {
            let mut out = Vec::new();
            for (w, t) in atoms {
                out.push((&w / &r(2, 1), t.clone()));
                out.push((&w / &r(2, 1), &r(1, 1) - &t));
            }
            TauMeasure::mixture(out).unwrap()
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn morphism(w1 in word_strategy(8), w2 in word_strategy(8)) {
        let a = Word::new(w1);
        let b = Word::new(w2);
        prop_assert_eq!(normal_order(&a.concat(&b)), op_mul(&normal_order(&a), &normal_order(&b)));
    }

    #[test]
    fn grading(w in word_strategy(10)) {
        let p = normal_order(&Word::new(w.clone()));
        for ((a, b), s) in p.terms() {
            for (k, _) in s.terms() {
                prop_assert_eq!(a + b + 2 * k, w.len() as u32);
            }
        }
        prop_assert!(matches_oracle(&p, &rewrite_oracle(&w)));
    }

    #[test]
    fn op_mul_associative(w1 in word_strategy(5), w2 in word_strategy(5), w3 in word_strategy(5)) {
        let (a, b, c) = (normal_order(&Word::new(w1)), normal_order(&Word::new(w2)), normal_order(&Word::new(w3)));
        prop_assert_eq!(op_mul(&op_mul(&a, &b), &c), op_mul(&a, &op_mul(&b, &c)));
    }

    #[test]
    fn mean_half_symmetrization(p in mean_half_strategy(), s in 0u32..=6) {
        prop_assert_eq!(p.first_moment(), r(1, 2));
        let qs = OperatorPoly::term(s, 0, ExactScalar::one());
        let sym = op_mul(&qs, &OperatorPoly::p()).add(&op_mul(&OperatorPoly::p(), &qs)).scale(&c(1, 2));
        prop_assert_eq!(quantize_monomial(s, 1, &p), sym);
    }

    #[test]
    fn hermiticity(p in measure_strategy(), s in 0u32..=5, rr in 0u32..=5) {
        prop_assert_eq!(adjoint(&quantize_monomial(s, rr, &p)), quantize_monomial(s, rr, &p.reflect()));
        if p.is_reflection_symmetric() {
            prop_assert_eq!(adjoint(&quantize_monomial(s, rr, &p)), quantize_monomial(s, rr, &p));
        }
    }

    #[test]
    fn quantization_is_linear(a in -5i64..5, b in -5i64..5, s1 in 0u32..4, r1 in 0u32..4, s2 in 0u32..4, r2 in 0u32..4, p in measure_strategy()) {
        let mut f = PolySymbol::monomial(s1, r1, c(a, 1));
        f.add(s2, r2, &c(b, 1));
        let want = quantize_monomial(s1, r1, &p).scale(&c(a, 1)).add(&quantize_monomial(s2, r2, &p).scale(&c(b, 1)));
        prop_assert_eq!(quantize_poly(&f, &p), want);
    }

    #[test]
    fn ordered_grading_of_quantized_monomials(p in measure_strategy(), s in 0u32..=6, rr in 0u32..=6) {
        prop_assert!(quantize_monomial(s, rr, &p).is_homogeneous(s + rr));
    }

    #[test]
    fn operator_text_round_trip(p in measure_strategy(), s in 0u32..=4, rr in 0u32..=4, w in word_strategy(6)) {
        let a = quantize_monomial(s, rr, &p).add(&normal_order(&Word::new(w)));
        prop_assert_eq!(parse_operator_poly(&a.to_string()).unwrap(), a);
    }

    #[test]
    fn cohen_multiplier_matches_direct_quadrature(p in measure_strategy(), u in -20.0f64..20.0) {
        let direct: num_complex::Complex64 = p.nodes(64).into_iter()
            .map(|(w, t)| num_complex::Complex64::from_polar(w, -(t - 0.5) * u)).sum();
        prop_assert!((cohen_multiplier(&p, u) - direct).norm() < 1e-12);
    }
}
