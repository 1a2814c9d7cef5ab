//! Independent oracles for characters and cohomology.

use std::collections::BTreeMap;

use miniw_core::brst::{cohomology_dims, BrstComplex};
use miniw_core::category_o::{window_coords, HighestWeightModule, ModuleKind, TruncationWindow, VermaModule};
use miniw_core::rational::{q, qr, Q};
use miniw_core::superalgebra::{build_algebra, SuperalgebraData, SUPPORTED};
use miniw_core::suite::generic_lambda;
use miniw_core::walgebra::{class_key, w_verma_character};
use miniw_core::weights::{finite_classes, Coord};

/// Coefficients of Π_i f_i(t) in half-integer steps, where each factor is
/// 1/(1 − t^{d}) (bosonic) or (1 + t^{d}) (fermionic), d in units of ½.
fn product_series(factors: &[(u32, bool)], max2: u32) -> Vec<i64> {
    let mut c = vec![0i64; max2 as usize + 1];
    c[0] = 1;
    for &(d, odd) in factors {
        let d = d as usize;
        if odd {
            for i in (d..c.len()).rev() {
                c[i] += c[i - d];
            }
        } else {
            for i in d..c.len() {
                c[i] += c[i - d];
            }
        }
    }
    c
}

fn series_half_steps(data: &SuperalgebraData, max: &Q) -> Vec<i64> {
    w_verma_character(data, max).series().values().copied().collect()
}

#[test]
fn sl2_w_verma_is_partitions() {
    let a = build_algebra("sl2").unwrap();
    let s: Vec<i64> = series_half_steps(&a, &q(8)).into_iter().step_by(2).collect();
    assert_eq!(s, vec![1, 1, 2, 3, 5, 7, 11, 15, 22]);
}

#[test]
fn spo21_w_verma_product() {
    let a = build_algebra("spo21").unwrap();
    let mut f = Vec::new();
    for n in 1..=8u32 {
        f.push((2 * n, false));
        f.push((2 * n - 1, true));
    }
    assert_eq!(series_half_steps(&a, &q(4)), product_series(&f, 8));
    assert_eq!(&series_half_steps(&a, &q(2))[..], &[1, 1, 1, 2, 3]);
}

#[test]
fn sl21_w_verma_product() {
    let a = build_algebra("sl21").unwrap();
    let mut f = Vec::new();
    for n in 1..=8u32 {
        f.extend([(2 * n, false), (2 * n, false), (2 * n - 1, true), (2 * n - 1, true)]);
    }
    assert_eq!(series_half_steps(&a, &q(4)), product_series(&f, 8));
}

#[test]
fn sl3_w_verma_product() {
    let a = build_algebra("sl3").unwrap();
    let mut f = Vec::new();
    for n in 1..=8u32 {
        f.extend([(2 * n, false), (2 * n, false), (2 * n - 1, false), (2 * n - 1, false)]);
    }
    assert_eq!(series_half_steps(&a, &q(4)), product_series(&f, 8));
}

/// Verma weight multiplicities from the product over lowering modes, expanded by a
/// dense generating-function sweep on affine coordinates.
fn verma_product_formula(data: &SuperalgebraData, window: &TruncationWindow) -> BTreeMap<Coord, i64> {
    let coords = window_coords(data, window);
    let top = coords.iter().fold([0i32; 3], |m, c| [m[0].max(c[0]), m[1].max(c[1]), m[2].max(c[2])]);
    let th = &data.root_coords[data.theta];
    let mut gens: Vec<(Coord, bool)> = Vec::new();
    for m in 0..=top[0] {
        for b in 0..data.dim {
            let (fin, odd) = match data.root_of(b) {
                Some(r) => (data.root_coords[r].clone(), data.root_parity[r]),
                None => (vec![0; data.h_dim], false),
            };
            if m == 0 && (data.root_of(b).is_none() || data.positive[data.root_of(b).unwrap()]) {
                continue;
            }
            // −(wt u_b + (−m)δ) = mδ − wt
            let mut c = [m, 0, 0];
            for i in 0..data.h_dim {
                c[i + 1] = m * th[i] as i32 - fin[i] as i32;
            }
            gens.push((c, odd));
        }
    }
    let idx = |c: &Coord| -> Option<usize> {
        if (0..3).any(|i| c[i] < 0 || c[i] > top[i]) {
            return None;
        }
        Some(((c[0] * (top[1] + 1) + c[1]) * (top[2] + 1) + c[2]) as usize)
    };
    let n = ((top[0] + 1) * (top[1] + 1) * (top[2] + 1)) as usize;
    let mut all: Vec<Coord> = Vec::with_capacity(n);
    for a in 0..=top[0] {
        for b in 0..=top[1] {
            for c in 0..=top[2] {
                all.push([a, b, c]);
            }
        }
    }
    let mut v = vec![0i64; n];
    v[0] = 1;
    for (g, odd) in gens {
        if g == [0, 0, 0] || g.iter().any(|x| *x < 0) {
            panic!("lowering generator with non-positive weight {g:?}");
        }
        let order: Vec<&Coord> = if odd { all.iter().rev().collect() } else { all.iter().collect() };
        for c in order {
            let src = [c[0] - g[0], c[1] - g[1], c[2] - g[2]];
            if let (Some(i), Some(j)) = (idx(c), idx(&src)) {
                v[i] += v[j];
            }
        }
    }
    coords.into_iter().map(|c| (c, v[idx(&c).unwrap()])).collect()
}

#[test]
fn verma_dims_match_product_formula() {
    for name in SUPPORTED {
        let a = build_algebra(name).unwrap();
        let w = if name == "sl2" {
            TruncationWindow::new(4, 3, 4)
        } else {
            TruncationWindow::new(2, 2, 2)
        };
        let want = verma_product_formula(&a, &w);
        let m = VermaModule::new(&a, generic_lambda(&a));
        for (c, d) in want {
            assert_eq!(m.dim(&c) as i64, d, "{name} at {c:?}");
        }
    }
}

#[test]
fn sl2_two_delta_has_six_words() {
    let a = build_algebra("sl2").unwrap();
    let m = VermaModule::new(&a, generic_lambda(&a));
    assert_eq!(m.dim(&[2, 2, 0]), 6);
}

#[test]
fn rank_two_cohomology_matches_w_verma_refined() {
    for name in ["sl3", "sl21"] {
        let a = build_algebra(name).unwrap();
        let wv = w_verma_character(&a, &qr(3, 2));
        for (b0, _) in finite_classes(&a, &qr(3, 2)) {
            let cx = BrstComplex::new(HighestWeightModule::new(&a, generic_lambda(&a), ModuleKind::Verma)).unwrap();
            let r = cohomology_dims(&cx, &b0, &[-1, 0, 1], 0, 8).unwrap();
            let (l, hf) = class_key(&a, &b0);
            assert_eq!(r.dims[&0] as i64, wv.get(&l, &hf), "{name} {b0:?}");
            assert_eq!((r.dims[&-1], r.dims[&1]), (0, 0), "{name} {b0:?}");
        }
    }
}

#[test]
fn sl2_offset_two_example() {
    let a = build_algebra("sl2").unwrap();
    let cx = BrstComplex::new(HighestWeightModule::new(&a, generic_lambda(&a), ModuleKind::Verma)).unwrap();
    let r = cohomology_dims(&cx, &[0, 2, 0], &[-1, 0, 1], 0, 8).unwrap();
    assert!(r.stabilized);
    assert_eq!(r.dims.values().copied().collect::<Vec<_>>(), vec![0, 2, 0]);
}

#[test]
fn simple_top_weight_vanishes_for_all_algebras() {
    for name in SUPPORTED {
        let a = build_algebra(name).unwrap();
        let lam = miniw_core::suite::alpha0_zero_lambda(&a);
        let cx = BrstComplex::new(HighestWeightModule::new(&a, lam, ModuleKind::Simple)).unwrap();
        let r = cohomology_dims(&cx, &[0, 0, 0], &[-1, 0, 1], 0, 6).unwrap();
        assert!(r.dims.values().all(|d| *d == 0), "{name}: {:?}", r.dims);
    }
}
