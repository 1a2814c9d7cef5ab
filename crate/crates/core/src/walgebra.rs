//! Graded data of the W-algebra side: generator families, W-Verma characters,
//! the central charge, highest weights φ_λ and the irreducible character formula.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use crate::category_o::{HighestWeightModule, ModuleKind, VermaModule};
use crate::error::{MiniwError, Result};
use crate::rational::{fmt_q, is_nonneg_integer, q, to_i64, Q};
use crate::superalgebra::SuperalgebraData;
use crate::weights::{
    alpha0_pairing, casimir_eigenvalue, coord_dw, coord_sub, dw_of, finite_classes, from_coords, AffineWeight, Coord,
};

/// One family u(n) of W-algebra modes, u ∈ g^f of grade −j.
#[derive(Clone, Debug, Serialize)]
pub struct WGenerator {
    pub basis: usize,
    #[serde(serialize_with = "crate::weights::ser_q")]
    pub grade: Q,
    /// Largest allowed mode; modes run over n ≤ max_mode.
    pub max_mode: i64,
    pub odd: bool,
    /// −wt(u) on h^f; zero for f and h^f.
    #[serde(serialize_with = "crate::weights::ser_qvec")]
    pub hf: Vec<Q>,
}

impl WGenerator {
    /// D^W-degree j − n of the mode n.
    pub fn degree(&self, n: i64) -> Q {
        &self.grade - q(n)
    }
}

/// (ĝ^f)_−: f and g_{−½} with modes n ≤ 0, h^f with modes n ≤ −1.
pub fn w_generator_spec(data: &SuperalgebraData) -> Vec<WGenerator> {
    let mut out = vec![WGenerator {
        basis: data.u_minus_theta(),
        grade: q(1),
        max_mode: 0,
        odd: false,
        hf: vec![Q::zero(); data.h_dim - 1],
    }];
    let h = crate::rational::half();
    for b in 0..data.dim {
        if data.grading[b] == -h.clone() {
            let r = data.root_of(b).expect("g_{-1/2} is spanned by root vectors");
            out.push(WGenerator {
                basis: b,
                grade: h.clone(),
                max_mode: 0,
                odd: data.parity[b],
                hf: data.roots[r][1..].iter().map(|v| -v).collect(),
            });
        }
    }
    for b in data.hf_basis() {
        out.push(WGenerator {
            basis: b,
            grade: Q::zero(),
            max_mode: -1,
            odd: false,
            hf: vec![Q::zero(); data.h_dim - 1],
        });
    }
    out
}

/// Graded dimensions keyed by (D^W-degree, h^f-weight).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WCharacter {
    pub entries: BTreeMap<(Q, Vec<Q>), i64>,
    pub max_level: Q,
}

impl WCharacter {
    /// Coefficients summed over h^f-weights, at every level in ½Z up to the maximum.
    pub fn series(&self) -> BTreeMap<Q, i64> {
        let mut out = BTreeMap::new();
        let h = crate::rational::half();
        let mut l = Q::zero();
        while l <= self.max_level {
            out.insert(l.clone(), 0);
            l += &h;
        }
        for ((l, _), d) in &self.entries {
            *out.entry(l.clone()).or_insert(0) += d;
        }
        out
    }

    pub fn get(&self, level: &Q, hf: &[Q]) -> i64 {
        self.entries.get(&(level.clone(), hf.to_vec())).copied().unwrap_or(0)
    }
}

/// Generating function of PBW monomials in the W generators, up to D^W-degree `max_level`.
pub fn w_verma_character(data: &SuperalgebraData, max_level: &Q) -> WCharacter {
    let mut acc: BTreeMap<(Q, Vec<Q>), i64> = BTreeMap::new();
    acc.insert((Q::zero(), vec![Q::zero(); data.h_dim - 1]), 1);
    for g in w_generator_spec(data) {
        let mut n = g.max_mode;
        loop {
            let d = g.degree(n);
            if d > *max_level {
                break;
            }
            // odd: (1 + t); even: 1/(1 − t) = Σ t^j
            let mut next = acc.clone();
            let mut term = acc;
            loop {
                term = shift(&term, &d, &g.hf, max_level);
                if term.is_empty() {
                    break;
                }
                for (k, c) in &term {
                    *next.entry(k.clone()).or_insert(0) += c;
                }
                if g.odd {
                    break;
                }
            }
            acc = next;
            n -= 1;
        }
    }
    acc.retain(|_, v| *v != 0);
    WCharacter {
        entries: acc,
        max_level: max_level.clone(),
    }
}

fn shift(
    m: &BTreeMap<(Q, Vec<Q>), i64>,
    d: &Q,
    hf: &[Q],
    max_level: &Q,
) -> BTreeMap<(Q, Vec<Q>), i64> {
    m.iter()
        .filter_map(|((l, h), c)| {
            let l2 = l + d;
            (l2 <= *max_level).then(|| ((l2, h.iter().zip(hf).map(|(a, b)| a + b).collect()), *c))
        })
        .collect()
}

/// c(k) = k·sdim g/(k+h^∨) − 6k + h^∨ − 4.
pub fn central_charge(data: &SuperalgebraData, k: &Q) -> Result<Q> {
    let hv = data.dual_coxeter();
    let s = k + &hv;
    if s.is_zero() {
        return Err(MiniwError::CriticalLevel(fmt_q(k)));
    }
    Ok(k * q(data.superdimension()) / s - q(6) * k + hv - q(4))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WHighestWeight {
    #[serde(serialize_with = "crate::weights::ser_qvec")]
    pub hf_values: Vec<Q>,
    #[serde(serialize_with = "crate::weights::ser_q")]
    pub s0: Q,
}

/// φ_λ: λ on h^f, and φ_λ(f⊗t) = |λ+ρ|² − |ρ|² − 2(k+h^∨)⟨λ,D^W⟩.
pub fn phi_map(data: &SuperalgebraData, lambda: &AffineWeight) -> WHighestWeight {
    let k = &lambda.level;
    WHighestWeight {
        hf_values: lambda.h_part[1..].to_vec(),
        s0: casimir_eigenvalue(data, lambda) - q(2) * (k + data.dual_coxeter()) * dw_of(lambda),
    }
}

/// (predicted S(0) on H^0(M(λ)) at D^W-offset m, φ_λ(f⊗t)).
pub fn s0_eigenvalue_check(data: &SuperalgebraData, lambda: &AffineWeight, m: &Q) -> (Q, Q) {
    let k = &lambda.level;
    let predicted = casimir_eigenvalue(data, lambda) - q(2) * (k + data.dual_coxeter()) * (dw_of(lambda) - m);
    (predicted, phi_map(data, lambda).s0)
}

#[derive(Clone, Debug)]
pub struct SimpleWCharacter {
    /// Predicted dims keyed like [`class_key`].
    pub predicted: WCharacter,
    /// Nonzero [L(λ):M(λ−β)] on the window.
    pub multiplicities: BTreeMap<Coord, i64>,
    /// ⟨λ,α_0^∨⟩ ∈ Z_{≥0}.
    pub vanishing_expected: bool,
    pub vanishes: bool,
}

fn hf_of(data: &SuperalgebraData, c: &Coord) -> Vec<Q> {
    from_coords(data, c).h_part[1..].to_vec()
}

/// Σ_μ [L(λ):M(μ)] ch M(φ_μ), with multiplicities from triangular inversion over
/// λ − β, β = β_0 + nα_0, offset(β_0) ≤ `max_level`, n ≤ `depth`.
pub fn simple_w_character(
    data: &SuperalgebraData,
    lambda: &AffineWeight,
    max_level: &Q,
    depth: u32,
) -> Result<SimpleWCharacter> {
    let simple = HighestWeightModule::new(data, lambda.clone(), ModuleKind::Simple);
    let verma = VermaModule::new(data, lambda.clone());
    let mut betas: Vec<Coord> = Vec::new();
    for (b0, _) in finite_classes(data, max_level) {
        for n in 0..=depth as i32 {
            let mut b = b0;
            b[0] = n;
            betas.push(b);
        }
    }
    betas.sort_by_key(|b| (b.iter().sum::<i32>(), *b));
    let mut mult: BTreeMap<Coord, i64> = BTreeMap::new();
    for b in &betas {
        let mut a = simple.dim(b) as i64;
        for (g, m) in &mult {
            let d = coord_sub(b, g);
            if d.iter().all(|v| *v >= 0) {
                a -= m * verma.dim(&d) as i64;
            }
        }
        if a != 0 {
            mult.insert(*b, a);
        }
    }
    if let Some(b) = mult.keys().find(|b| b[0] == depth as i32 && depth > 0) {
        return Err(MiniwError::WindowTooSmall(format!(
            "multiplicity at the chain boundary {b:?}; increase the depth beyond {depth}"
        )));
    }
    let wv = w_verma_character(data, max_level);
    let mut entries: BTreeMap<(Q, Vec<Q>), i64> = BTreeMap::new();
    for (b, m) in &mult {
        let mut fin = *b;
        fin[0] = 0;
        let off = coord_dw(data, &fin);
        let hf = hf_of(data, &fin);
        for ((l, h), d) in &wv.entries {
            let lev = l + &off;
            if lev > *max_level {
                continue;
            }
            let hh: Vec<Q> = h.iter().zip(&hf).map(|(x, y)| x + y).collect();
            *entries.entry((lev, hh)).or_insert(0) += m * d;
        }
    }
    entries.retain(|_, v| *v != 0);
    let vanishing_expected = is_nonneg_integer(&alpha0_pairing(data, lambda));
    let vanishes = entries.is_empty();
    Ok(SimpleWCharacter {
        predicted: WCharacter {
            entries,
            max_level: max_level.clone(),
        },
        multiplicities: mult,
        vanishing_expected,
        vanishes,
    })
}

/// Key of the finite class β_0 in a W-character: (⟨β_0,D^W⟩, β_0 on h^f).
pub fn class_key(data: &SuperalgebraData, beta0: &Coord) -> (Q, Vec<Q>) {
    (coord_dw(data, beta0), hf_of(data, beta0))
}

/// Whether ⟨λ,α_0^∨⟩ is a nonnegative integer, and its value.
pub fn alpha0_integrality(data: &SuperalgebraData, lambda: &AffineWeight) -> (bool, Option<i64>) {
    let p = alpha0_pairing(data, lambda);
    (is_nonneg_integer(&p), to_i64(&p))
}
