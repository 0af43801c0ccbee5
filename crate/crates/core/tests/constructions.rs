use ltperm_core::construct::{
    affine_trace, build_translator_permutation, complete_b_values, cr_quad_family, g_map,
    is_b_complete, linear_binomial,
};
use ltperm_core::inverse::{inverse_b0, two_fold_check, zero_translator_family};
use ltperm_core::special::{
    agw_reduction, build_special, cr_spe_check, kernel_reduction, predicate_var2,
    special_inverse_even_s, spectrum_identity_oddp, trace_power_family, SpecialRecipe,
};
use ltperm_core::translator::{find_translators, QuadTraceParams};
use ltperm_core::{Domain, Element, Field, FuncTable, LinearizedMap};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn pick(xs: &[Element], r: &mut impl Rng) -> Element {
    xs[r.random_range(0..xs.len())]
}

/// Every self-map of GF(p^k), in lexicographic order of value indices.
fn all_subfield_maps(f: &Field, k: u32) -> Vec<FuncTable> {
    let sub = f.subfield_view(k).unwrap().elements;
    let m = sub.len();
    let total = m.pow(m as u32);
    (0..total)
        .map(|mut code| {
            let values = (0..m)
                .map(|_| {
                    let v = sub[code % m];
                    code /= m;
                    v
                })
                .collect();
            FuncTable::from_values(f, Domain::Subfield(k), Domain::Subfield(k), values).unwrap()
        })
        .collect()
}

fn is_additive(t: &FuncTable) -> bool {
    let f = t.field();
    f.elements()
        .iter()
        .all(|&x| f.elements().iter().all(|&y| t.eval(f.add(x, y)) == f.add(t.eval(x), t.eval(y))))
}

#[test]
fn linearized_permutation_matches_table() {
    let mut r = rng(11);
    for (p, n, k) in [(2, 4, 1), (2, 4, 2), (2, 6, 2), (3, 3, 1), (3, 4, 2), (5, 2, 1)] {
        let f = Field::new(p, n).unwrap();
        for _ in 0..40 {
            let coeffs = (0..n / k).map(|_| pick(f.elements(), &mut r)).collect();
            let l = LinearizedMap::new(&f, k, coeffs).unwrap();
            let t = l.table();
            assert_eq!(l.is_permutation(), t.is_permutation());
            assert!(is_additive(&t));
            if l.is_permutation() {
                assert!(l.inverse_table().unwrap().compose(&t).unwrap().is_identity());
            }
        }
    }
}

#[test]
fn binomial_linear_maps() {
    for (p, n) in [(2, 4), (2, 6), (3, 4)] {
        let f = Field::new(p, n).unwrap();
        let k = n / 2;
        let pk1 = (p as u64).pow(k) + 1;
        let (mut perms, mut invols) = (0, 0);
        for &a in f.nonzero() {
            for &b in f.nonzero() {
                let lb = linear_binomial(&f, a, b, k).unwrap();
                let t = lb.map.table();
                assert_eq!(t, LinearizedMap::binomial(&f, k, a, b).unwrap().table());
                assert_eq!(lb.is_perm, t.is_permutation());
                assert_eq!(lb.is_perm, f.pow(f.div(a, b).unwrap(), pk1) != f.one());
                assert_eq!(lb.is_invol, t.is_involution());
                perms += lb.is_perm as u32;
                invols += lb.is_invol as u32;
            }
        }
        assert!(perms > 0 && invols > 0);
    }
}

/// Over GF(16) with `k = 2`, every translator of the trace and every self-map
/// of GF(4): `F` permutes exactly when `u + b h(u)` does.
#[test]
fn translator_construction_is_exhaustive_over_gf16() {
    let f = Field::new(2, 4).unwrap();
    let l = LinearizedMap::identity(&f, 2).unwrap();
    let hs = all_subfield_maps(&f, 2);
    assert_eq!(hs.len(), 256);
    let a = LinearizedMap::binomial(&f, 2, f.nonzero()[4], f.one()).unwrap();
    assert!(a.is_permutation());
    for beta in [f.one(), f.nonzero()[6]] {
        let t = affine_trace(&f, 2, beta, f.one()).unwrap();
        for w in find_translators(&t).unwrap() {
            for h in &hs {
                let g = g_map(h, w.b()).unwrap().is_permutation();
                for lm in [&l, &a] {
                    let c = build_translator_permutation(lm, h, &w).unwrap();
                    assert_eq!(c.table.is_permutation(), g);
                    assert_eq!(c.g_is_permutation, g);
                }
                assert!(two_fold_check(&w, h).unwrap());
            }
        }
    }
}

#[test]
fn b_complete_h_gives_permutations() {
    let f = Field::new(3, 4).unwrap();
    let l = LinearizedMap::identity(&f, 2).unwrap();
    let mut r = rng(5);
    let sub = f.subfield_view(2).unwrap().elements;
    let t = affine_trace(&f, 2, f.one(), f.zero()).unwrap();
    let ws = find_translators(&t).unwrap();
    let mut complete = 0;
    for _ in 0..200 {
        let mut values = sub.clone();
        for i in (1..values.len()).rev() {
            values.swap(i, r.random_range(0..=i));
        }
        let h = FuncTable::from_values(&f, Domain::Subfield(2), Domain::Subfield(2), values).unwrap();
        let bs = complete_b_values(&h).unwrap();
        for &b in &sub {
            assert_eq!(bs.contains(&b), g_map(&h, b).unwrap().is_permutation());
            assert_eq!(is_b_complete(&h, b), bs.contains(&b));
        }
        for w in ws.iter().filter(|w| bs.contains(&w.b())).take(5) {
            complete += 1;
            assert!(build_translator_permutation(&l, &h, w).unwrap().table.is_permutation());
        }
    }
    assert!(complete > 0);
}

/// `u^{p^2 + p + 2}` over GF(27) is not a permutation, yet `u + b u^{14}`
/// permutes for some `b`; each such `b = T(γ)` lifts to GF(3^6).
#[test]
fn power_map_complete_values_over_gf27() {
    let f27 = Field::new(3, 3).unwrap();
    let h = FuncTable::from_fn(&f27, |u| f27.pow(u, 14));
    assert!(!h.is_permutation());
    let bs = complete_b_values(&h).unwrap();
    let naive: Vec<Element> = f27
        .elements()
        .iter()
        .copied()
        .filter(|&b| {
            let mut seen = [false; 27];
            f27.elements().iter().all(|&u| {
                let i = f27.index_of(f27.add(u, f27.mul(b, f27.pow(u, 14)))) as usize;
                !std::mem::replace(&mut seen[i], true)
            })
        })
        .collect();
    assert_eq!(bs, naive);
    assert!(bs.len() > 1);

    let f = Field::new(3, 6).unwrap();
    let h = FuncTable::tabulate(&f, Domain::Subfield(3), Domain::Subfield(3), |u| f.pow(u, 14)).unwrap();
    let big_bs = complete_b_values(&h).unwrap();
    assert_eq!(big_bs.len(), bs.len());
    let t = affine_trace(&f, 3, f.one(), f.zero()).unwrap();
    let id = LinearizedMap::identity(&f, 3).unwrap();
    let mut r = rng(27);
    for &b in f.subfield_view(3).unwrap().elements.iter().filter(|b| !b.is_zero()) {
        let gamma = loop {
            let g = pick(f.nonzero(), &mut r);
            if f.rel_trace(3, g).unwrap() == b {
                break g;
            }
        };
        let w = ltperm_core::TranslatorWitness::new(t.clone(), gamma, b).unwrap();
        let c = build_translator_permutation(&id, &h, &w).unwrap();
        assert_eq!(c.table.is_permutation(), big_bs.contains(&b));
    }
}

/// Involutive binomial `L` over GF(16) and additive `h`: `F` is linear and
/// `L(x) + γ h(f(L(x)))` inverts it. Writing `L(γ)` for `γ` there is wrong
/// as soon as `L(γ) != γ`.
#[test]
fn involutive_binomial_inverse() {
    let f = Field::new(2, 4).unwrap();
    let sub = f.subfield_view(2).unwrap().elements;
    let t = affine_trace(&f, 2, f.one(), f.zero()).unwrap();
    let ws: Vec<_> = find_translators(&t).unwrap().into_iter().filter(|w| w.b().is_zero()).collect();
    let mut hs: Vec<FuncTable> = sub
        .iter()
        .filter(|c| !c.is_zero())
        .map(|&c| FuncTable::tabulate(&f, Domain::Subfield(2), Domain::Subfield(2), |u| f.mul(c, u)).unwrap())
        .collect();
    hs.push(FuncTable::tabulate(&f, Domain::Subfield(2), Domain::Subfield(2), |u| f.pow(u, 2)).unwrap());
    let (mut cases, mut scaled_ok, mut moved) = (0, 0, 0);
    for &a in f.nonzero() {
        for &b in f.nonzero() {
            let lb = linear_binomial(&f, a, b, 2).unwrap();
            if !lb.is_invol {
                continue;
            }
            let l = &lb.map;
            for w in &ws {
                for h in &hs {
                    let big = build_translator_permutation(l, h, w).unwrap().table;
                    assert!(is_additive(&big));
                    let inv = inverse_b0(w, h, l).unwrap();
                    let corrected = FuncTable::from_fn(&f, |x| {
                        let y = l.eval(x);
                        f.add(y, f.mul(w.gamma(), h.eval(w.f().eval(y))))
                    });
                    assert_eq!(inv, corrected);
                    assert!(inv.compose(&big).unwrap().is_identity());
                    assert!(big.compose(&inv).unwrap().is_identity());
                    let lg = l.eval(w.gamma());
                    let scaled = FuncTable::from_fn(&f, |x| {
                        let y = l.eval(x);
                        f.add(y, f.mul(lg, h.eval(w.f().eval(y))))
                    });
                    let ok = scaled.compose(&big).unwrap().is_identity();
                    cases += 1;
                    scaled_ok += ok as u32;
                    if lg != w.gamma() {
                        moved += 1;
                        assert!(!ok);
                    }
                }
            }
        }
    }
    assert!(cases > 0 && moved > 0);
    assert_eq!(scaled_ok, cases - moved);
}

#[test]
fn zero_translator_family_over_gf81() {
    let f = Field::new(3, 4).unwrap();
    let mut built = 0;
    for (k, i, l) in [(1, 0, 1), (1, 1, 1), (2, 0, 1), (2, 1, 1)] {
        let lm = LinearizedMap::identity(&f, k).unwrap();
        let h = FuncTable::tabulate(&f, Domain::Subfield(k), Domain::Subfield(k), |u| f.pow(u, 2)).unwrap();
        for &gamma in f.nonzero() {
            match zero_translator_family(&f, gamma, i, l, &lm, &h) {
                Ok(fam) => {
                    built += 1;
                    assert!(fam.is_permutation);
                    assert!(fam.inverse_verified);
                    assert!(fam.table.t_fold(3).unwrap().is_identity());
                }
                Err(ltperm_core::Error::GammaConditionFailed) => {}
                Err(ltperm_core::Error::InvalidParameter(_)) => {}
                Err(e) => panic!("k={k} i={i}: {e:?}"),
            }
        }
    }
    assert!(built > 0);
}

#[test]
fn quadratic_family_over_gf64() {
    let f = Field::new(2, 6).unwrap();
    let mut seen = 0;
    for (k, i) in [(2, 1), (3, 2), (2, 3)] {
        let l = LinearizedMap::identity(&f, k).unwrap();
        let q = QuadTraceParams::new(&f, f.one(), i, 1, k).unwrap();
        for h in all_subfield_maps(&f, k).into_iter().step_by(if k == 2 { 7 } else { 4001 }) {
            let Ok(c) = cr_quad_family(&q, f.one(), &l, &h) else { continue };
            seen += 1;
            assert_eq!(c.table.is_permutation(), c.g_is_permutation);
        }
    }
    assert!(seen > 0);
}

#[test]
fn trace_power_family_invariants() {
    for (p, n) in [(3, 2), (2, 4), (3, 4)] {
        let f = Field::new(p, n).unwrap();
        let k = n / 2;
        let l = LinearizedMap::identity(&f, k).unwrap();
        let sub = f.subfield_view(k).unwrap().elements;
        let q = f.order() as u64;
        let mut r = rng(q);
        for _ in 0..30 {
            let gamma = pick(f.nonzero(), &mut r);
            let delta = pick(&sub, &mut r);
            let s = r.random_range(1..q - 1);
            let fam = trace_power_family(&f, gamma, delta, s, &l).unwrap();
            assert!(fam.b_matches_trace);
            assert_eq!(fam.table.is_permutation(), fam.g_is_permutation);
            if let Some(inv) = &fam.inverse {
                assert!(fam.b.is_zero());
                assert!(inv.compose(&fam.table).unwrap().is_identity());
            }
        }
    }
}

#[test]
fn odd_special_reduction_and_spectra() {
    for (n, k) in [(2, 1), (4, 2)] {
        let f = Field::new(3, n).unwrap();
        let kernel = f.subfield_view(k).unwrap().kernel;
        let q = f.order() as u64;
        let mut r = rng(q + 1);
        for _ in 0..25 {
            let delta = pick(&kernel, &mut r);
            let s = r.random_range(0..q - 1);
            let rec = SpecialRecipe::with_identity(&f, k, delta, s).unwrap();
            let g = kernel_reduction(&rec).unwrap();
            assert_eq!(g.domain(), Domain::Kernel(k));
            let big = build_special(&rec).unwrap();
            assert_eq!(predicate_var2(&rec).unwrap(), big.is_permutation());
            for &lambda in f.nonzero() {
                assert!(spectrum_identity_oddp(&rec, lambda).unwrap().holds);
            }
            if s % 2 == 0 {
                let inv = special_inverse_even_s(&rec).unwrap();
                assert!(inv.compose(&big).unwrap().is_identity());
            }
        }
    }
}

/// The closed form for `ρx + (x^{p^k} - x + δ)^{ℓ(p^k-1)+1}` holds for every
/// `ρ ∈ GF(p^k)*` but not for every `ρ` in the larger field.
#[test]
fn rho_family_needs_subfield_rho() {
    let f = Field::new(3, 4).unwrap();
    let k = 2;
    let kernel: Vec<Element> =
        f.subfield_view(k).unwrap().kernel.into_iter().filter(|e| !e.is_zero()).collect();
    let delta = kernel[0];
    let (mut inside, mut outside, mut wrong) = (0, 0, 0);
    for &rho in f.nonzero() {
        for ell in 1..=9 {
            let c = cr_spe_check(&f, rho, ell, delta, k).unwrap();
            if f.in_subfield(k, rho) {
                inside += 1;
                assert_eq!(c.predicted, c.oracle);
                assert_eq!(c.reduced, Some(c.oracle));
            } else {
                outside += 1;
                wrong += (c.predicted != c.oracle) as u32;
            }
        }
    }
    assert_eq!((inside, outside), (72, 648));
    assert_eq!(wrong, 72);
}

#[test]
fn agw_reduction_on_random_maps() {
    let f = Field::new(3, 2).unwrap();
    let k = 1;
    let kernel = f.subfield_view(k).unwrap().kernel;
    let sub = f.subfield_view(k).unwrap().elements;
    let units: Vec<Element> = sub.iter().copied().filter(|e| !e.is_zero()).collect();
    let mut r = rng(9);
    let mut verdicts = [0u32; 2];
    for _ in 0..300 {
        let (a, b) = (pick(&sub, &mut r), pick(&sub, &mut r));
        let l = LinearizedMap::binomial(&f, k, a, b).unwrap();
        if !l.is_permutation() {
            continue;
        }
        let h = FuncTable::from_values(
            &f,
            Domain::Kernel(k),
            Domain::Subfield(k),
            kernel.iter().map(|_| pick(&units, &mut r)).collect(),
        )
        .unwrap();
        let g = FuncTable::from_values(
            &f,
            Domain::Kernel(k),
            Domain::Full,
            kernel.iter().map(|_| pick(f.elements(), &mut r)).collect(),
        )
        .unwrap();
        verdicts[agw_reduction(&l, &g, &h).unwrap() as usize] += 1;
    }
    assert!(verdicts[0] > 0 && verdicts[1] > 0);
}
