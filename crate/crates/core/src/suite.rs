//! The acceptance checks, shared by the `suite` subcommand and the acceptance test.

use std::time::Instant;

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::brst::{cohomology_dims, verify_nilpotency, BrstComplex};
use crate::category_o::{
    sl2_f_homology, zero_mode_cohomology, HighestWeightModule, ModuleKind, Sl2ModuleKind, TruncationWindow,
};
use crate::error::Result;
use crate::rational::{fmt_q, parse_q, q, qr, Q};
use crate::superalgebra::{build_algebra, SuperalgebraData, SUPPORTED};
use crate::walgebra::{central_charge, class_key, phi_map, s0_eigenvalue_check, simple_w_character, w_verma_character};
use crate::weights::{alpha0_pairing, finite_classes, parse_lambda, AffineWeight};

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

pub const CRITERIA: [(u32, &str); 9] = [
    (1, "algebra integrity"),
    (2, "nilpotency of d, d^chi, d^st"),
    (3, "sl2 f-homology"),
    (4, "zero-mode cohomology"),
    (5, "stabilized Verma cohomology"),
    (6, "sl2 simple-module cohomology"),
    (7, "character formula vs BRST"),
    (8, "c(k) and phi spot values"),
    (9, "dual Coxeter numbers"),
];

/// Generic weight used throughout: k = 1/3, x = 1/5, h^f = 2/7.
pub fn generic_lambda(data: &SuperalgebraData) -> AffineWeight {
    lambda_with(data, "k=1/3; x=1/5", "2/7")
}

/// A weight with ⟨λ,α_0^∨⟩ = 0.
pub fn alpha0_zero_lambda(data: &SuperalgebraData) -> AffineWeight {
    lambda_with(data, "k=1/3; x=1/6", "2/7")
}

fn lambda_with(data: &SuperalgebraData, base: &str, hf: &str) -> AffineWeight {
    let s = if data.h_dim == 1 {
        base.to_string()
    } else {
        format!("{base}; hf=[{hf}]")
    };
    parse_lambda(data, &s).expect("built-in weight")
}

type Check = std::result::Result<String, String>;

fn timed(id: u32, f: impl FnOnce() -> Check) -> CriterionResult {
    let t = Instant::now();
    let r = f();
    let name = CRITERIA.iter().find(|(i, _)| *i == id).map(|(_, n)| *n).unwrap_or("?");
    let (passed, detail) = match r {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    CriterionResult {
        id,
        name,
        passed,
        detail,
        seconds: t.elapsed().as_secs_f64(),
    }
}

fn err(e: crate::MiniwError) -> String {
    format!("{} ({})", e, e.kind())
}

fn algebras() -> std::result::Result<Vec<SuperalgebraData>, String> {
    SUPPORTED.iter().map(|n| build_algebra(n).map_err(err)).collect()
}

pub fn algebra_integrity() -> Check {
    let mut out = Vec::new();
    for name in SUPPORTED {
        let t = Instant::now();
        let a = build_algebra(name).map_err(err)?;
        a.check_all().map_err(|e| format!("{name}: {e}"))?;
        let s = t.elapsed().as_secs_f64();
        if s >= 1.0 {
            return Err(format!("{name}: took {s:.2}s"));
        }
        out.push(format!("{name} {s:.3}s"));
    }
    Ok(out.join(", "))
}

pub fn nilpotency() -> Check {
    let jobs: Vec<(&str, u32, u8)> = SUPPORTED
        .iter()
        .flat_map(|n| {
            let depth = if *n == "sl2" { 3 } else { 2 };
            [(*n, depth, 0u8), (*n, depth, 1u8)]
        })
        .collect();
    let res: Vec<std::result::Result<String, String>> = jobs
        .par_iter()
        .map(|(name, depth, which)| {
            let a = build_algebra(name).map_err(err)?;
            let lam = if *which == 0 {
                generic_lambda(&a)
            } else {
                lambda_with(&a, "k=-1/2; x=3/4", "-1/3")
            };
            let cx = BrstComplex::new(HighestWeightModule::new(&a, lam, ModuleKind::Verma)).map_err(err)?;
            let w = TruncationWindow::new(*depth, *depth, *depth);
            let rep = verify_nilpotency(&cx, &w, &[-2, -1, 0, 1, 2]).map_err(|e| format!("{name}: {}", err(e)))?;
            Ok(format!("{name}#{which}: {} states", rep.states))
        })
        .collect();
    res.into_iter().collect::<std::result::Result<Vec<_>, _>>().map(|v| v.join(", "))
}

pub fn f_homology() -> Check {
    let depth = 6;
    let cases: Vec<(&str, Sl2ModuleKind, (usize, usize))> = vec![
        ("0", Sl2ModuleKind::Verma, (1, 0)),
        ("1", Sl2ModuleKind::Verma, (1, 0)),
        ("1/2", Sl2ModuleKind::Verma, (1, 0)),
        ("0", Sl2ModuleKind::Simple, (0, 0)),
        ("1", Sl2ModuleKind::Simple, (0, 0)),
        ("2", Sl2ModuleKind::Simple, (0, 0)),
        ("1/2", Sl2ModuleKind::Simple, (1, 0)),
        ("-3/2", Sl2ModuleKind::Simple, (1, 0)),
    ];
    for (a, kind, want) in &cases {
        let got = sl2_f_homology(&parse_q(a).unwrap(), *kind, depth).map_err(err)?;
        if got != *want {
            return Err(format!("a = {a}, {kind:?}: got {got:?}, want {want:?}"));
        }
    }
    Ok(format!("{} cases", cases.len()))
}

pub fn zero_mode() -> Check {
    let mut n = 0;
    for a in algebras()? {
        let lams = [
            generic_lambda(&a),
            alpha0_zero_lambda(&a),
            lambda_with(&a, "k=2; x=1/2", "1"),
        ];
        for lam in &lams {
            let got = zero_mode_cohomology(&a, lam, ModuleKind::Verma, 4).map_err(err)?;
            if got != (1, 0) {
                return Err(format!("{} Verma at {lam}: {got:?}", a.name));
            }
            n += 1;
        }
        let lam = alpha0_zero_lambda(&a);
        debug_assert!(alpha0_pairing(&a, &lam).is_zero());
        let got = zero_mode_cohomology(&a, &lam, ModuleKind::Simple, 4).map_err(err)?;
        if got != (0, 0) {
            return Err(format!("{} simple at {lam}: {got:?}", a.name));
        }
        n += 1;
    }
    Ok(format!("{n} cases"))
}

/// (offset, h^f part, H^{-1,0,1}) of one finite class.
pub type ClassDims = (Q, Vec<Q>, std::collections::BTreeMap<i32, usize>);

/// Stabilized H^{-1,0,1} for every finite class up to `max_offset`, keyed like [`class_key`].
pub fn h0_by_class(
    data: &SuperalgebraData,
    lam: &AffineWeight,
    kind: ModuleKind,
    max_offset: &Q,
) -> Result<Vec<ClassDims>> {
    let classes = finite_classes(data, max_offset);
    classes
        .par_iter()
        .map(|(b0, _)| {
            let cx = BrstComplex::new(HighestWeightModule::new(data, lam.clone(), kind))?;
            let r = cohomology_dims(&cx, b0, &[-1, 0, 1], 0, 12)?;
            let (l, hf) = class_key(data, b0);
            Ok((l, hf, r.dims))
        })
        .collect()
}

pub fn verma_cohomology() -> Check {
    let mut out = Vec::new();
    for (name, max, want) in [("sl2", q(4), vec![1, 1, 2, 3, 5]), ("spo21", q(2), vec![1, 1, 1, 2, 3])] {
        let a = build_algebra(name).map_err(err)?;
        let res = h0_by_class(&a, &generic_lambda(&a), ModuleKind::Verma, &max).map_err(err)?;
        let mut got = Vec::new();
        for (l, _, dims) in &res {
            if dims[&-1] != 0 || dims[&1] != 0 {
                return Err(format!("{name} offset {}: {dims:?}", fmt_q(l)));
            }
            got.push(dims[&0]);
        }
        if got != want {
            return Err(format!("{name}: H^0 {got:?}, want {want:?}"));
        }
        out.push(format!("{name} {got:?}"));
    }
    Ok(out.join("; "))
}

pub fn sl2_simple() -> Check {
    let a = build_algebra("sl2").map_err(err)?;
    let zero = h0_by_class(&a, &alpha0_zero_lambda(&a), ModuleKind::Simple, &q(2)).map_err(err)?;
    for (l, _, dims) in &zero {
        if dims[&0] != 0 {
            return Err(format!("integral case, offset {}: {dims:?}", fmt_q(l)));
        }
    }
    let wv = w_verma_character(&a, &q(3));
    let gen = h0_by_class(&a, &generic_lambda(&a), ModuleKind::Simple, &q(3)).map_err(err)?;
    let mut got = Vec::new();
    for (l, hf, dims) in &gen {
        let want = wv.get(l, hf) as usize;
        if dims[&0] != want {
            return Err(format!("generic, offset {}: {} vs {want}", fmt_q(l), dims[&0]));
        }
        got.push(dims[&0]);
    }
    Ok(format!("integral: 0 at offsets 0..2; generic {got:?}"))
}

pub fn character_formula() -> Check {
    let a = build_algebra("sl2").map_err(err)?;
    let mut out = Vec::new();
    for (label, lam) in [("generic", generic_lambda(&a)), ("integral", alpha0_zero_lambda(&a))] {
        let pred = simple_w_character(&a, &lam, &q(3), 4).map_err(err)?;
        if pred.vanishing_expected != pred.vanishes {
            return Err(format!("{label}: vanishing clause disagrees with the series"));
        }
        let brst = h0_by_class(&a, &lam, ModuleKind::Simple, &q(3)).map_err(err)?;
        let mut got = Vec::new();
        for (l, hf, dims) in &brst {
            let p = pred.predicted.get(l, hf);
            if p < 0 || dims[&0] != p as usize {
                return Err(format!("{label} offset {}: predicted {p}, BRST {}", fmt_q(l), dims[&0]));
            }
            got.push(p);
        }
        out.push(format!("{label} {got:?}"));
    }
    Ok(out.join("; "))
}

pub fn spot_values() -> Check {
    let a = build_algebra("sl2").map_err(err)?;
    let c1 = central_charge(&a, &q(1)).map_err(err)?;
    if c1 != q(-7) {
        return Err(format!("c(1) = {}", fmt_q(&c1)));
    }
    for k in [q(1), qr(-1, 2), q(3), qr(2, 7), qr(-5, 3)] {
        let c = central_charge(&a, &k).map_err(err)?;
        let r = (&k + q(2)) * c + q(6) * &k * &k + q(11) * &k + q(4);
        if !r.is_zero() {
            return Err(format!("identity fails at k = {}", fmt_q(&k)));
        }
    }
    for d in algebras()? {
        let vac = AffineWeight::vacuum(d.h_dim, qr(1, 3));
        let p = phi_map(&d, &vac);
        if !p.s0.is_zero() || p.hf_values.iter().any(|v| !v.is_zero()) {
            return Err(format!("{}: phi of the vacuum weight is {p:?}", d.name));
        }
        for lam in [generic_lambda(&d), alpha0_zero_lambda(&d)] {
            let (pred, phi) = s0_eigenvalue_check(&d, &lam, &Q::zero());
            if pred != phi {
                return Err(format!("{}: s0 check at m = 0: {} vs {}", d.name, fmt_q(&pred), fmt_q(&phi)));
            }
        }
    }
    Ok("c(1) = -7; 5 levels; vacuum and s0 checks on 4 algebras".into())
}

pub fn dual_coxeter() -> Check {
    let want = [("sl2", q(2)), ("sl3", q(3)), ("spo21", qr(3, 2)), ("sl21", q(1))];
    let mut out = Vec::new();
    for (name, h) in want {
        let got = build_algebra(name).map_err(err)?.dual_coxeter();
        if got != h {
            return Err(format!("{name}: {}", fmt_q(&got)));
        }
        out.push(format!("{name}={}", fmt_q(&got)));
    }
    Ok(out.join(", "))
}

pub fn run_criterion(id: u32) -> CriterionResult {
    timed(id, match id {
        1 => algebra_integrity,
        2 => nilpotency,
        3 => f_homology,
        4 => zero_mode,
        5 => verma_cohomology,
        6 => sl2_simple,
        7 => character_formula,
        8 => spot_values,
        9 => dual_coxeter,
        _ => return timed(id, || Err("unknown criterion".into())),
    })
}

pub fn run_suite(ids: &[u32]) -> Vec<CriterionResult> {
    ids.iter().map(|&i| run_criterion(i)).collect()
}

pub fn all_ids() -> Vec<u32> {
    CRITERIA.iter().map(|(i, _)| *i).collect()
}
