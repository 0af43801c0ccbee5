use ltperm_core::construct::affine_trace;
use ltperm_core::translator::{
    classify_binomial, derivative_coefficients, find_translators, is_translator,
    quad_trace_condition, quad_trace_translator, trace_monomial_weight_filter, BinomialClass,
    QuadTraceParams,
};
use ltperm_core::{Domain, Element, Field, FuncTable};
use proptest::prelude::*;

fn naive_translators(t: &FuncTable) -> Vec<(Element, Element)> {
    let f = t.field();
    let k = match t.codomain() {
        Domain::Subfield(k) => k,
        _ => unreachable!(),
    };
    let sub = f.subfield_view(k).unwrap().elements;
    let mut out = Vec::new();
    for &gamma in f.nonzero() {
        for &b in &sub {
            let ok = f.elements().iter().all(|&x| {
                sub.iter().all(|&u| {
                    t.eval(f.add(x, f.mul(u, gamma))) == f.add(t.eval(x), f.mul(u, b))
                })
            });
            if ok {
                out.push((gamma, b));
            }
        }
    }
    out
}

fn found(t: &FuncTable) -> Vec<(Element, Element)> {
    find_translators(t).unwrap().iter().map(|w| (w.gamma(), w.b())).collect()
}

#[test]
fn search_matches_naive_double_loop() {
    for (p, n, k) in [(2, 4, 2), (2, 4, 1), (3, 2, 1), (2, 6, 3), (3, 4, 2)] {
        let f = Field::new(p, n).unwrap();
        let beta = f.nonzero()[3];
        let tables = [
            affine_trace(&f, k, beta, f.one()).unwrap(),
            FuncTable::tabulate(&f, Domain::Full, Domain::Subfield(k), |x| {
                f.rel_trace(k, f.mul(beta, f.pow(x, p as u64 + 1))).unwrap()
            })
            .unwrap(),
            FuncTable::tabulate(&f, Domain::Full, Domain::Subfield(k), |x| {
                f.rel_trace(k, f.pow(x, 1 + (p as u64).pow(k))).unwrap()
            })
            .unwrap(),
        ];
        for t in &tables {
            let fast = found(t);
            assert_eq!(fast, naive_translators(t), "GF({p}^{n}) k={k}");
            for &(g, b) in &fast {
                assert!(is_translator(t, g, b).unwrap());
            }
        }
    }
}

fn poly_eval(f: &Field, coeffs: &[Element], x: Element) -> Element {
    coeffs
        .iter()
        .enumerate()
        .fold(f.zero(), |acc, (i, &c)| f.add(acc, f.mul(c, f.pow(x, i as u64))))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn derivative_coefficients_match_table(
        nine in any::<bool>(),
        raw in prop::collection::vec(any::<u32>(), 1..10),
        ug in any::<u32>(),
    ) {
        let f = if nine { Field::new(3, 2).unwrap() } else { Field::new(2, 3).unwrap() };
        let q = f.order();
        let coeffs: Vec<Element> = raw.iter().take(q as usize).map(|&c| f.element_at(c % q).unwrap()).collect();
        let ugamma = f.element_at(ug % q).unwrap();
        let c = derivative_coefficients(&f, &coeffs, ugamma).unwrap();
        for &x in f.elements() {
            let expected = f.sub(poly_eval(&f, &coeffs, f.add(x, ugamma)), poly_eval(&f, &coeffs, x));
            prop_assert_eq!(poly_eval(&f, &c, x), expected);
        }
    }
}

#[test]
fn binomial_translators_over_gf16() {
    let f = Field::new(2, 4).unwrap();
    let mut seen_trace = 0;
    for &beta in f.nonzero() {
        for i in 1..15u64 {
            for j in i + 1..16 {
                let Ok(t) = FuncTable::tabulate(&f, Domain::Full, Domain::Subfield(2), |x| {
                    f.add(f.mul(beta, f.pow(x, i)), f.pow(x, j))
                }) else {
                    continue;
                };
                let ws = find_translators(&t).unwrap();
                let class = classify_binomial(&f, beta, i, j, 2).unwrap();
                assert_eq!(!ws.is_empty(), class != BinomialClass::NoTranslator, "β={beta:?} i={i} j={j}");
                match class {
                    BinomialClass::TraceForm { e: 0 } => assert_eq!(ws.len(), 15),
                    BinomialClass::TraceForm { .. } => {
                        assert_eq!(ws.len(), 3);
                        assert!(ws.iter().all(|w| w.b().is_zero()));
                    }
                    BinomialClass::NoTranslator => {}
                }
                seen_trace += (class != BinomialClass::NoTranslator) as u32;
            }
        }
    }
    assert_eq!(seen_trace, 2);
}

#[test]
fn weight_filter_is_necessary() {
    for (p, n, k) in [(2, 4, 2), (2, 6, 2), (2, 6, 3), (3, 4, 2), (3, 3, 1)] {
        let f = Field::new(p, n).unwrap();
        let (mut survivors, mut constant) = (0, 0);
        for d in 1..f.order() as u64 {
            let t = FuncTable::tabulate(&f, Domain::Full, Domain::Subfield(k), |x| {
                f.rel_trace(k, f.pow(x, d)).unwrap()
            })
            .unwrap();
            if t.values().iter().all(|&v| v == t.values()[0]) {
                constant += 1;
                continue;
            }
            let has = !find_translators(&t).unwrap().is_empty();
            let verdict = trace_monomial_weight_filter(d, p, n).unwrap();
            if has {
                assert!(verdict.is_possible(), "GF({p}^{n}) k={k} d={d}");
                survivors += 1;
            }
        }
        assert!(survivors > 0);
        if (p, n, k) == (2, 4, 2) {
            assert_eq!(constant, 3);
        }
    }
}

#[test]
fn quadratic_trace_witnesses_are_sound() {
    for (p, n, k) in [(2, 4, 1), (2, 6, 2), (2, 6, 3), (3, 4, 1), (3, 4, 2), (2, 6, 1)] {
        let f = Field::new(p, n).unwrap();
        let r = n / k;
        for l in 1..r {
            for i in 0..n {
                let q = QuadTraceParams::new(&f, f.one(), i, l, k).unwrap();
                let t = q.table(&f);
                let all = found(&t);
                for &gamma in f.nonzero() {
                    if !quad_trace_condition(&f, &q, gamma).unwrap() {
                        continue;
                    }
                    if let Some(w) = quad_trace_translator(&f, &q, gamma).unwrap() {
                        assert!(w.reverify());
                        assert!(all.contains(&(gamma, w.b())));
                        if p == 3 {
                            assert!(w.b().is_zero());
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn quadratic_condition_matches_power_form() {
    let f = Field::new(3, 4).unwrap();
    let q = QuadTraceParams::new(&f, f.one(), 0, 1, 1).unwrap();
    let minus_one = f.scalar(-1);
    for &gamma in f.nonzero() {
        assert_eq!(
            quad_trace_condition(&f, &q, gamma).unwrap(),
            f.pow(gamma, 3u64.pow(2) - 1) == minus_one
        );
    }
    let f27 = Field::new(3, 3).unwrap();
    let q = QuadTraceParams::new(&f27, f27.one(), 0, 1, 1).unwrap();
    assert!(f27.nonzero().iter().all(|&g| !quad_trace_condition(&f27, &q, g).unwrap()));
}
