//! Affine weights, the α_0-direction and the t-weight projection.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{MiniwError, Result};
use crate::rational::{fmt_q, parse_q, q, Q};
use crate::superalgebra::SuperalgebraData;

/// Coordinates in the affine simple roots `(α_0, α_1, ..., α_r)`; unused slots are zero.
pub type Coord = [i32; 3];

pub const ZERO_COORD: Coord = [0; 3];

pub fn coord_add(a: &Coord, b: &Coord) -> Coord {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub fn coord_sub(a: &Coord, b: &Coord) -> Coord {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub fn coord_nonneg(a: &Coord) -> bool {
    a.iter().all(|&c| c >= 0)
}

/// λ = h_part + level·Λ_0 + delta·δ, with `h_part` the values on the Cartan basis `[x, h^f...]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffineWeight {
    pub h_part: Vec<Q>,
    pub level: Q,
    pub delta: Q,
}

/// Restriction of a weight to t = h^f ⊕ C·D^W.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct TWeight {
    #[serde(serialize_with = "ser_qvec")]
    pub hf_part: Vec<Q>,
    #[serde(rename = "dW", serialize_with = "ser_q")]
    pub dw: Q,
}

pub fn ser_q<S: serde::Serializer>(x: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_q(x))
}

pub fn ser_qvec<S: serde::Serializer>(x: &[Q], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(x.len()))?;
    for v in x {
        seq.serialize_element(&fmt_q(v))?;
    }
    seq.end()
}

impl AffineWeight {
    pub fn zero(h_dim: usize) -> Self {
        AffineWeight {
            h_part: vec![Q::zero(); h_dim],
            level: Q::zero(),
            delta: Q::zero(),
        }
    }

    /// k·Λ_0.
    pub fn vacuum(h_dim: usize, k: Q) -> Self {
        AffineWeight {
            level: k,
            ..Self::zero(h_dim)
        }
    }

    pub fn new(h_part: Vec<Q>, level: Q, delta: Q) -> Self {
        AffineWeight { h_part, level, delta }
    }

    pub fn scale(&self, c: &Q) -> Self {
        AffineWeight {
            h_part: self.h_part.iter().map(|v| v * c).collect(),
            level: &self.level * c,
            delta: &self.delta * c,
        }
    }

    /// ⟨λ, x⟩.
    pub fn x_value(&self) -> &Q {
        &self.h_part[0]
    }
}

impl Add for &AffineWeight {
    type Output = AffineWeight;
    fn add(self, o: &AffineWeight) -> AffineWeight {
        AffineWeight {
            h_part: self.h_part.iter().zip(&o.h_part).map(|(a, b)| a + b).collect(),
            level: &self.level + &o.level,
            delta: &self.delta + &o.delta,
        }
    }
}

impl Sub for &AffineWeight {
    type Output = AffineWeight;
    fn sub(self, o: &AffineWeight) -> AffineWeight {
        AffineWeight {
            h_part: self.h_part.iter().zip(&o.h_part).map(|(a, b)| a - b).collect(),
            level: &self.level - &o.level,
            delta: &self.delta - &o.delta,
        }
    }
}

impl Neg for &AffineWeight {
    type Output = AffineWeight;
    fn neg(self) -> AffineWeight {
        self.scale(&q(-1))
    }
}

impl fmt::Display for AffineWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let hp: Vec<String> = self.h_part.iter().map(fmt_q).collect();
        write!(
            f,
            "k={}; h=[{}]; delta={}",
            fmt_q(&self.level),
            hp.join(", "),
            fmt_q(&self.delta)
        )
    }
}

/// ρ = ρ̄ + h^∨Λ_0, with ρ̄ = ½(Σ even positive roots − Σ odd positive roots).
pub fn rho(data: &SuperalgebraData) -> AffineWeight {
    let mut h = vec![Q::zero(); data.h_dim];
    for (r, root) in data.roots.iter().enumerate() {
        if !data.positive[r] {
            continue;
        }
        for (acc, v) in h.iter_mut().zip(root) {
            if data.root_parity[r] {
                *acc -= v;
            } else {
                *acc += v;
            }
        }
    }
    let half = Q::new(1.into(), 2.into());
    AffineWeight {
        h_part: h.iter().map(|v| v * &half).collect(),
        level: data.dual_coxeter(),
        delta: Q::zero(),
    }
}

pub fn theta(data: &SuperalgebraData) -> AffineWeight {
    AffineWeight::new(data.roots[data.theta].clone(), Q::zero(), Q::zero())
}

pub fn delta(data: &SuperalgebraData) -> AffineWeight {
    AffineWeight::new(vec![Q::zero(); data.h_dim], Q::zero(), q(1))
}

/// α_0 = δ − θ.
pub fn alpha0(data: &SuperalgebraData) -> AffineWeight {
    &delta(data) - &theta(data)
}

/// ⟨λ, α_0^∨⟩ = ⟨λ,K⟩ − (λ̄|θ).
pub fn alpha0_pairing(data: &SuperalgebraData, lambda: &AffineWeight) -> Q {
    &lambda.level - data.pair_weights(&lambda.h_part, &data.roots[data.theta])
}

/// ⟨λ, D^W⟩ with D^W = x + D.
pub fn dw_of(lambda: &AffineWeight) -> Q {
    lambda.x_value() + &lambda.delta
}

pub fn project_xi(lambda: &AffineWeight) -> TWeight {
    TWeight {
        hf_part: lambda.h_part[1..].to_vec(),
        dw: dw_of(lambda),
    }
}

/// The invariant form on ĥ* with (δ,Λ_0) = 1 and (δ,δ) = (Λ_0,Λ_0) = 0.
pub fn pair(data: &SuperalgebraData, a: &AffineWeight, b: &AffineWeight) -> Q {
    data.pair_weights(&a.h_part, &b.h_part) + &a.level * &b.delta + &a.delta * &b.level
}

/// (λ, λ + 2ρ) = |λ+ρ|² − |ρ|².
pub fn casimir_eigenvalue(data: &SuperalgebraData, lambda: &AffineWeight) -> Q {
    let r = rho(data);
    let two_rho = r.scale(&q(2));
    pair(data, lambda, &(lambda + &two_rho))
}

/// The element Σ c_j α_j of ĥ*.
pub fn from_coords(data: &SuperalgebraData, c: &Coord) -> AffineWeight {
    let mut w = alpha0(data).scale(&q(c[0] as i64));
    for (i, &s) in data.simple_roots.iter().enumerate() {
        let ai = AffineWeight::new(data.roots[s].clone(), Q::zero(), Q::zero());
        w = &w + &ai.scale(&q(c[i + 1] as i64));
    }
    w
}

/// Affine simple-root coordinates of a level-zero weight, if integral.
pub fn to_coords(data: &SuperalgebraData, beta: &AffineWeight) -> Option<Coord> {
    if !beta.level.is_zero() || !beta.delta.is_integer() {
        return None;
    }
    let c0 = beta.delta.clone();
    // β̄ + c_0·θ = Σ c_i α_i
    let target: Vec<Q> = beta
        .h_part
        .iter()
        .zip(&data.roots[data.theta])
        .map(|(b, t)| b + &c0 * t)
        .collect();
    let r = data.h_dim;
    let mut rows: Vec<Vec<Q>> = (0..r)
        .map(|h| {
            let mut row: Vec<Q> = data.simple_roots.iter().map(|&s| data.roots[s][h].clone()).collect();
            row.push(target[h].clone());
            row
        })
        .collect();
    rows = crate::linalg::rref_dense(rows).0;
    let mut out = ZERO_COORD;
    out[0] = crate::rational::to_i64(&c0)? as i32;
    for (i, row) in rows.iter().enumerate() {
        let v = &row[r];
        out[i + 1] = crate::rational::to_i64(v)? as i32;
    }
    Some(out)
}

/// μ ≤ λ iff λ − μ ∈ Q̂_+.
pub fn leq(data: &SuperalgebraData, mu: &AffineWeight, lambda: &AffineWeight) -> Result<bool> {
    if mu.level != lambda.level {
        return Err(MiniwError::LevelMismatch(fmt_q(&mu.level), fmt_q(&lambda.level)));
    }
    Ok(to_coords(data, &(lambda - mu)).is_some_and(|c| coord_nonneg(&c)))
}

/// D^W value of a Q̂ element in affine coordinates.
pub fn coord_dw(data: &SuperalgebraData, c: &Coord) -> Q {
    dw_of(&from_coords(data, c))
}

/// Finite parts β_0 ∈ Q_+ (coordinates with c_0 = 0) with ⟨β_0, D^W⟩ ≤ `max_offset`,
/// sorted by offset then coordinates.
pub fn finite_classes(data: &SuperalgebraData, max_offset: &Q) -> Vec<(Coord, Q)> {
    let r = data.h_dim;
    let xs: Vec<Q> = data.simple_roots.iter().map(|&s| data.roots[s][0].clone()).collect();
    assert!(xs.iter().all(|v| v.is_positive()), "simple roots must have positive grade");
    let mut out = Vec::new();
    let mut cur = ZERO_COORD;
    fn rec(i: usize, r: usize, xs: &[Q], cur: &mut Coord, acc: Q, max: &Q, out: &mut Vec<(Coord, Q)>) {
        if i == r {
            out.push((*cur, acc));
            return;
        }
        let mut c = 0;
        let mut a = acc;
        while &a <= max {
            cur[i + 1] = c;
            rec(i + 1, r, xs, cur, a.clone(), max, out);
            c += 1;
            a += &xs[i];
        }
        cur[i + 1] = 0;
    }
    rec(0, r, &xs, &mut cur, Q::zero(), max_offset, &mut out);
    out.sort_by(|a, b| a.1.cmp(&b.1).then(a.0.cmp(&b.0)));
    out
}

/// Parses `"k=1/3; x=1/5; hf=[0]; delta=0"`; omitted fields are zero, `k` is required.
pub fn parse_lambda(data: &SuperalgebraData, spec: &str) -> Result<AffineWeight> {
    let mut lam = AffineWeight::zero(data.h_dim);
    let mut have_k = false;
    for part in spec.split(';').map(str::trim).filter(|p| !p.is_empty()) {
        let (key, val) = part
            .split_once('=')
            .ok_or_else(|| MiniwError::Parse(format!("expected key=value in {part:?}")))?;
        let val = val.trim();
        match key.trim() {
            "k" => {
                lam.level = parse_q(val)?;
                have_k = true;
            }
            "x" => lam.h_part[0] = parse_q(val)?,
            "delta" => lam.delta = parse_q(val)?,
            "hf" => {
                let inner = val
                    .strip_prefix('[')
                    .and_then(|v| v.strip_suffix(']'))
                    .ok_or_else(|| MiniwError::Parse(format!("hf must be a bracketed list: {val:?}")))?;
                let vals: Vec<Q> = inner
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(parse_q)
                    .collect::<Result<_>>()?;
                if vals.len() != data.h_dim - 1 {
                    return Err(MiniwError::InvalidConfig {
                        field: "lambda.hf".into(),
                        reason: format!("{} expects {} h^f values, got {}", data.name, data.h_dim - 1, vals.len()),
                    });
                }
                lam.h_part[1..].clone_from_slice(&vals);
            }
            other => {
                return Err(MiniwError::InvalidConfig {
                    field: format!("lambda.{other}"),
                    reason: "unknown key (use k, x, hf, delta)".into(),
                })
            }
        }
    }
    if !have_k {
        return Err(MiniwError::InvalidConfig {
            field: "lambda.k".into(),
            reason: "level k is required".into(),
        });
    }
    Ok(lam)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qr;
    use crate::superalgebra::build_algebra;

    #[test]
    fn rho_examples() {
        let sl2 = build_algebra("sl2").unwrap();
        let r = rho(&sl2);
        assert_eq!(r.h_part, theta(&sl2).scale(&qr(1, 2)).h_part);
        assert_eq!(r.level, q(2));
        let spo = build_algebra("spo21").unwrap();
        let r = rho(&spo);
        assert_eq!(r.h_part, theta(&spo).scale(&qr(1, 4)).h_part);
        assert_eq!(r.level, qr(3, 2));
        let sl21 = build_algebra("sl21").unwrap();
        let r = rho(&sl21);
        assert_eq!(sl21.pair_weights(&r.h_part, &sl21.roots[sl21.theta]), Q::zero());
        assert_eq!(r.level, q(1));
    }

    #[test]
    fn alpha0_examples() {
        let sl2 = build_algebra("sl2").unwrap();
        let k = qr(2, 7);
        let vac = AffineWeight::vacuum(1, k.clone());
        assert_eq!(alpha0_pairing(&sl2, &vac), k);
        let lt = &vac + &theta(&sl2);
        assert_eq!(alpha0_pairing(&sl2, &lt), &k - q(2));
        assert_eq!(project_xi(&(&lt + &alpha0(&sl2))), project_xi(&lt));
    }

    #[test]
    fn dw_examples() {
        let vac = AffineWeight::vacuum(1, q(1));
        assert_eq!(dw_of(&vac), Q::zero());
        let sl2 = build_algebra("sl2").unwrap();
        assert_eq!(dw_of(&(&vac - &delta(&sl2))), q(-1));
    }

    #[test]
    fn order_examples() {
        let sl3 = build_algebra("sl3").unwrap();
        let lam = parse_lambda(&sl3, "k=1/3; x=1/5; hf=[2/7]").unwrap();
        assert!(leq(&sl3, &(&lam - &delta(&sl3)), &lam).unwrap());
        assert!(leq(&sl3, &lam, &lam).unwrap());
        assert!(!leq(&sl3, &(&lam + &alpha0(&sl3)), &lam).unwrap());
        let other = AffineWeight::vacuum(2, q(5));
        assert!(leq(&sl3, &other, &lam).is_err());
    }

    #[test]
    fn casimir_examples() {
        let sl2 = build_algebra("sl2").unwrap();
        let k = qr(1, 3);
        let vac = AffineWeight::vacuum(1, k.clone());
        assert_eq!(casimir_eigenvalue(&sl2, &vac), Q::zero());
        assert_eq!(casimir_eigenvalue(&sl2, &(&vac + &theta(&sl2))), q(4));
        assert_eq!(casimir_eigenvalue(&sl2, &(&vac - &delta(&sl2))), -(&k + q(2)) * q(2));
    }

    #[test]
    fn coords_round_trip() {
        for name in crate::superalgebra::SUPPORTED {
            let a = build_algebra(name).unwrap();
            for c in [[1, 0, 0], [0, 1, 0], [2, 3, 1], [5, 0, 2]] {
                let mut c = c;
                if a.h_dim == 1 {
                    c[2] = 0;
                }
                assert_eq!(to_coords(&a, &from_coords(&a, &c)), Some(c));
            }
            assert_eq!(coord_dw(&a, &[1, 0, 0]), Q::zero());
        }
    }

    #[test]
    fn finite_class_offsets() {
        let spo = build_algebra("spo21").unwrap();
        let cls = finite_classes(&spo, &q(2));
        assert_eq!(cls.len(), 5);
        let sl3 = build_algebra("sl3").unwrap();
        // (c1, c2) with (c1+c2)/2 <= 1
        assert_eq!(finite_classes(&sl3, &q(1)).len(), 6);
    }

    #[test]
    fn parse_errors_name_the_field() {
        let sl3 = build_algebra("sl3").unwrap();
        match parse_lambda(&sl3, "k=1; hf=[1,2]") {
            Err(MiniwError::InvalidConfig { field, .. }) => assert_eq!(field, "lambda.hf"),
            other => panic!("{other:?}"),
        }
        assert!(parse_lambda(&sl3, "x=1").is_err());
        assert!(parse_lambda(&sl3, "k=1; y=2").is_err());
    }
}
