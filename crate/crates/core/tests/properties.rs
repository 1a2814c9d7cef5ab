use miniw_core::brst::{vacuum_state, verify_nilpotency, BrstComplex, Part};
use miniw_core::category_o::{AffMode, HighestWeightModule, ModuleKind, TruncationWindow, VermaModule};
use miniw_core::fock::{FockData, FockGenerator};
use miniw_core::rational::{fmt_q, koszul, parse_q, q, qr, LinComb, Q};
use miniw_core::superalgebra::{build_algebra, neutral_pairing, SUPPORTED};
use miniw_core::walgebra::{central_charge, phi_map};
use miniw_core::weights::{alpha0, alpha0_pairing, coord_add, coord_dw, coord_sub, parse_lambda, AffineWeight};
use num_traits::Zero;
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Q> {
    (-30i64..30, 1i64..12).prop_map(|(n, d)| qr(n, d))
}

fn lambda_for(name: &str, k: &Q, x: &Q, h: &Q) -> AffineWeight {
    let a = build_algebra(name).unwrap();
    let s = if a.h_dim == 1 {
        format!("k={}; x={}", fmt_q(k), fmt_q(x))
    } else {
        format!("k={}; x={}; hf=[{}]", fmt_q(k), fmt_q(x), fmt_q(h))
    };
    parse_lambda(&a, &s).unwrap()
}

/// A(Bw) ∓ B(Aw) against the scalar [A,B]w.
fn check_relation<G: FockGenerator + std::fmt::Debug>(
    a: G,
    b: G,
    w: &[G],
    apply: impl Fn(G, &[G]) -> Vec<(Vec<G>, Q)>,
    contract: impl Fn(G, G) -> Q,
) -> Result<(), TestCaseError> {
    let mut lhs: LinComb<Vec<G>> = LinComb::new();
    for (w1, c1) in apply(b, w) {
        for (w2, c2) in apply(a, &w1) {
            lhs.add_term(w2, c1.clone() * c2);
        }
    }
    let s = q(koszul(a.odd(), b.odd()));
    for (w1, c1) in apply(a, w) {
        for (w2, c2) in apply(b, &w1) {
            lhs.add_term(w2, -(c1.clone() * c2 * &s));
        }
    }
    let scalar = match (a.is_creator(), b.is_creator()) {
        (false, true) => contract(a, b),
        (true, false) => -(contract(b, a) * &s),
        _ => Q::zero(),
    };
    let mut rhs: LinComb<Vec<G>> = LinComb::new();
    rhs.add_term(w.to_vec(), scalar);
    lhs.add_scaled(&rhs, &q(-1));
    prop_assert!(lhs.is_zero(), "{a:?} {b:?} on {w:?}");
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rational_roundtrip(x in rational()) {
        prop_assert_eq!(parse_q(&fmt_q(&x)).unwrap(), x);
    }

    #[test]
    fn central_charge_identity(k in rational()) {
        prop_assume!(k != q(-2));
        let a = build_algebra("sl2").unwrap();
        let c = central_charge(&a, &k).unwrap();
        prop_assert!(((&k + q(2)) * c + q(6) * &k * &k + q(11) * &k + q(4)).is_zero());
    }

    #[test]
    fn neutral_fermion_relations(alg in 0usize..2, m1 in -3i64..3, m2 in -3i64..3, i1 in 0usize..2, i2 in 0usize..2, pick in 0usize..50) {
        let name = ["spo21", "sl3"][alg];
        let data = build_algebra(name).unwrap();
        let fd = FockData::new(&data, neutral_pairing(&data).unwrap());
        let n = fd.pairing.len();
        let words: Vec<_> = fd.neutral_words_below(&[2, 3, 3]).into_values().flatten().collect();
        let w = &words[pick % words.len()];
        let a = fd.neutral(i1 % n, m1);
        let b = fd.neutral(i2 % n, m2);
        check_relation(a, b, w, |g, w| fd.neutral_apply(g, w), |x, y| fd.neutral_contract(x, y))?;
    }

    #[test]
    fn charged_fermion_relations(alg in 0usize..4, m1 in -2i64..3, m2 in -2i64..3, r1 in 0usize..6, r2 in 0usize..6, u1: bool, u2: bool, pick in 0usize..200) {
        let data = build_algebra(SUPPORTED[alg]).unwrap();
        let fd = FockData::new(&data, neutral_pairing(&data).unwrap());
        let np = fd.pos_basis.len();
        let words: Vec<_> = fd.charged_words_below(&[2, 2, 2]).into_values().flatten().collect();
        let w = &words[pick % words.len()];
        let gen = |up: bool, r: usize, m: i64| if up { fd.psi_dual(r % np, m) } else { fd.psi(r % np, m) };
        check_relation(gen(u1, r1, m1), gen(u2, r2, m2), w, |g, w| fd.charged_apply(g, w), |x, y| fd.charged_contract(x, y))?;
    }

    #[test]
    fn action_respects_bracket(alg in 0usize..4, b1 in 0usize..8, b2 in 0usize..8, m1 in -1i64..2, m2 in -1i64..2, pick in 0usize..40, k in rational(), x in rational()) {
        let name = SUPPORTED[alg];
        let data = build_algebra(name).unwrap();
        let lam = lambda_for(name, &k, &x, &qr(1, 3));
        let kk = lam.level.clone();
        let v = VermaModule::new(&data, lam);
        let (b1, b2) = (b1 % data.dim, b2 % data.dim);
        let beta = [1, 1, 0];
        let basis = v.basis(&beta);
        prop_assume!(!basis.0.is_empty());
        let w = basis.0[pick % basis.0.len()].clone();
        let (x1, x2) = (AffMode::new(b1, m1), AffMode::new(b2, m2));
        let one = LinComb::single(w.clone(), Q::from_integer(1.into()));
        let mut lhs = v.apply_seq(&[x1, x2], &one);
        let s = q(koszul(data.is_odd(b1), data.is_odd(b2)));
        lhs.add_scaled(&v.apply_seq(&[x2, x1], &one), &-s);
        let mut rhs: LinComb<Vec<_>> = LinComb::new();
        for (c, coef) in data.bracket(b1, b2) {
            rhs.add_scaled(&v.apply(AffMode::new(*c, m1 + m2), &w), coef);
        }
        if m1 + m2 == 0 {
            let f = &data.form[b1][b2] * q(m1) * kk;
            rhs.add_term(w.clone(), f);
        }
        lhs.add_scaled(&rhs, &q(-1));
        prop_assert!(lhs.is_zero(), "{} [{b1}({m1}), {b2}({m2})]", name);
    }

    #[test]
    fn simple_dims_bounded_by_verma(alg in 0usize..4, k in rational(), x in rational(), c0 in 0i32..2, c1 in 0i32..3, c2 in 0i32..3) {
        let name = SUPPORTED[alg];
        let data = build_algebra(name).unwrap();
        let lam = lambda_for(name, &k, &x, &qr(2, 5));
        let m = HighestWeightModule::new(&data, lam, ModuleKind::Simple);
        let c2 = if data.h_dim == 1 { 0 } else { c2 };
        let beta = [c0, c1, c2];
        prop_assert!(m.dim(&beta) <= m.verma.dim(&beta));
    }

    #[test]
    fn phi_hf_is_alpha0_invariant(alg in 0usize..4, k in rational(), x in rational()) {
        let name = SUPPORTED[alg];
        let data = build_algebra(name).unwrap();
        let lam = lambda_for(name, &k, &x, &qr(-3, 4));
        let shifted = &lam - &alpha0(&data);
        let (p, ps) = (phi_map(&data, &lam), phi_map(&data, &shifted));
        prop_assert_eq!(&p.hf_values, &ps.hf_values);
        // s0(λ−α_0) − s0(λ) = −2⟨λ,α_0^∨⟩
        prop_assert_eq!(ps.s0 - p.s0, q(-2) * alpha0_pairing(&data, &lam));
    }

    #[test]
    fn d_preserves_t_weight(alg in 0usize..4, k in rational(), x in rational(), c0 in 0i32..3, c1 in 0i32..3, deg in -1i32..2) {
        let name = SUPPORTED[alg];
        let data = build_algebra(name).unwrap();
        prop_assume!(k.clone() + data.dual_coxeter() != Q::zero());
        let lam = lambda_for(name, &k, &x, &qr(1, 7));
        let cx = BrstComplex::new(HighestWeightModule::new(&data, lam, ModuleKind::Verma)).unwrap();
        let beta = [c0, c1, 0];
        for s in cx.complex_basis(&beta, deg).iter().take(40) {
            prop_assert_eq!(cx.state_coord(s), beta);
            for (t, _) in cx.apply_d(s, Part::St).iter() {
                prop_assert_eq!(cx.state_coord(t), beta);
                prop_assert_eq!(t.degree(), deg + 1);
            }
            for (t, _) in cx.apply_d(s, Part::Chi).iter() {
                prop_assert_eq!(cx.state_coord(t), coord_sub(&beta, &[1, 0, 0]));
                prop_assert_eq!(t.degree(), deg + 1);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn nilpotent_at_random_weights(alg in 0usize..4, k in rational(), x in rational(), h in rational()) {
        let name = SUPPORTED[alg];
        let data = build_algebra(name).unwrap();
        let lam = lambda_for(name, &k, &x, &h);
        let cx = BrstComplex::new(HighestWeightModule::new(&data, lam, ModuleKind::Verma)).unwrap();
        let depth = if data.h_dim == 1 { 2 } else { 1 };
        prop_assert!(verify_nilpotency(&cx, &TruncationWindow::new(depth, 2, depth), &[-1, 0, 1]).is_ok());
    }

    #[test]
    fn simple_complex_is_nilpotent(alg in 0usize..2, h in rational()) {
        let name = ["sl2", "spo21"][alg];
        let data = build_algebra(name).unwrap();
        let lam = lambda_for(name, &qr(1, 3), &qr(1, 6), &h);
        let cx = BrstComplex::new(HighestWeightModule::new(&data, lam, ModuleKind::Simple)).unwrap();
        prop_assert!(verify_nilpotency(&cx, &TruncationWindow::new(2, 2, 2), &[-1, 0, 1]).is_ok());
    }

    #[test]
    fn rank_is_permutation_invariant(seed in any::<u64>()) {
        let data = build_algebra("sl2").unwrap();
        let lam = lambda_for("sl2", &qr(1, 3), &qr(1, 5), &Q::zero());
        let cx = BrstComplex::new(HighestWeightModule::new(&data, lam, ModuleKind::Verma)).unwrap();
        let cols = cx.xi_basis(&[0, 2, 0], 3, 0);
        let rows = cx.xi_basis(&[0, 2, 0], 3, 1);
        let m = cx.matrix_of(&cols, &rows, |s| cx.apply_d(s, Part::Full)).unwrap();
        let perm = |n: usize, mut s: u64| {
            let mut p: Vec<usize> = (0..n).collect();
            for i in (1..n).rev() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                p.swap(i, (s >> 33) as usize % (i + 1));
            }
            p
        };
        let pm = m.select_columns(&perm(m.ncols(), seed)).select_rows(&perm(m.nrows(), seed ^ 0x9e37));
        prop_assert_eq!(pm.rank(), m.rank());
    }
}

#[test]
fn j_current_on_vacuum_is_the_weight() {
    for name in ["sl3", "sl21"] {
        let data = build_algebra(name).unwrap();
        let lam = lambda_for(name, &qr(1, 3), &qr(1, 5), &qr(2, 7));
        let hval = lam.h_part[1].clone();
        let cx = BrstComplex::new(HighestWeightModule::new(&data, lam, ModuleKind::Verma)).unwrap();
        let h = data.hf_basis()[0];
        let out = cx.apply_j(h, 0, &vacuum_state());
        assert_eq!(out.len(), 1);
        assert_eq!(out.coeff(&vacuum_state()), hval, "{name}");
        let m = cx.j_current(h, 0, &[1, 1, 0], 0).unwrap();
        assert_eq!(m.nrows(), m.ncols());
    }
}

#[test]
fn j_of_f_shifts_the_weight_block() {
    let data = build_algebra("spo21").unwrap();
    let lam = lambda_for("spo21", &qr(1, 3), &qr(1, 5), &Q::zero());
    let cx = BrstComplex::new(HighestWeightModule::new(&data, lam, ModuleKind::Verma)).unwrap();
    let f = data.u_minus_theta();
    let m = cx.j_current(f, -1, &[0, 0, 0], 0).unwrap();
    assert_eq!(m.ncols(), 1);
    assert!(!m.is_zero());
    let lie = &cx.module.verma.lie;
    for n in [-2i64, -1, 0] {
        let target = coord_add(&[0, 0, 0], &lie.neg_coord(AffMode::new(f, n)));
        assert_eq!(coord_dw(&data, &target), q(1 - n));
    }
}
