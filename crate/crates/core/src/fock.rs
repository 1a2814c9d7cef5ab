//! Neutral and charged free-fermion Fock spaces.
//!
//! A Fock word is a sorted list of creation operators applied to the vacuum.
//! Creators are inserted with a Koszul sign, annihilators are moved right
//! and contracted against each factor in turn.

use std::collections::BTreeMap;
use std::hash::Hash;

use num_traits::Zero;

use crate::rational::Q;
use crate::superalgebra::{NeutralPairing, SuperalgebraData};
use crate::weights::{coord_add, coord_nonneg, coord_sub, Coord, ZERO_COORD};

pub trait FockGenerator: Copy + Ord + Hash {
    fn odd(&self) -> bool;
    fn is_creator(&self) -> bool;
}

/// Word parity.
pub fn word_parity<G: FockGenerator>(w: &[G]) -> bool {
    w.iter().filter(|g| g.odd()).count() % 2 == 1
}

/// Applies `g` to the word `w`. `contract(g, y)` is the scalar `[g, y]` for an
/// annihilator `g` and creator `y`.
pub fn fock_apply<G: FockGenerator>(g: G, w: &[G], contract: impl Fn(G, G) -> Q) -> Vec<(Vec<G>, Q)> {
    if g.is_creator() {
        let pos = w.partition_point(|y| *y < g);
        if g.odd() && w.get(pos) == Some(&g) {
            return Vec::new();
        }
        let passed_odd = w[..pos].iter().filter(|y| y.odd()).count();
        let mut out = Vec::with_capacity(w.len() + 1);
        out.extend_from_slice(&w[..pos]);
        out.push(g);
        out.extend_from_slice(&w[pos..]);
        let sign = if g.odd() && passed_odd % 2 == 1 { -1 } else { 1 };
        return vec![(out, Q::from_integer(sign.into()))];
    }
    let mut res: Vec<(Vec<G>, Q)> = Vec::new();
    let mut passed_odd = 0usize;
    for (j, y) in w.iter().enumerate() {
        let c = contract(g, *y);
        if !c.is_zero() {
            let mut rest = Vec::with_capacity(w.len() - 1);
            rest.extend_from_slice(&w[..j]);
            rest.extend_from_slice(&w[j + 1..]);
            let c = if g.odd() && passed_odd % 2 == 1 { -c } else { c };
            match res.iter_mut().find(|(r, _)| *r == rest) {
                Some((_, acc)) => *acc += c,
                None => res.push((rest, c)),
            }
        }
        if y.odd() {
            passed_odd += 1;
        }
    }
    res.retain(|(_, c)| !c.is_zero());
    res
}

/// Φ_a(mode), `a` indexing the basis of g_{½}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NeutralGen {
    pub mode: i16,
    pub idx: u8,
    pub odd: bool,
}

impl FockGenerator for NeutralGen {
    fn odd(&self) -> bool {
        self.odd
    }
    fn is_creator(&self) -> bool {
        self.mode <= -1
    }
}

/// ψ_α(mode) (`upper = false`) or ψ^α(mode) (`upper = true`); `root` indexes Δ_{>0}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChargedGen {
    pub upper: bool,
    pub root: u8,
    pub mode: i16,
    pub odd: bool,
}

impl FockGenerator for ChargedGen {
    fn odd(&self) -> bool {
        self.odd
    }
    fn is_creator(&self) -> bool {
        if self.upper {
            self.mode <= 0
        } else {
            self.mode <= -1
        }
    }
}

pub type NeutralWord = Vec<NeutralGen>;
pub type ChargedWord = Vec<ChargedGen>;

pub fn ghost_degree(w: &[ChargedGen]) -> i32 {
    w.iter().map(|g| if g.upper { 1 } else { -1 }).sum()
}

/// Generator data for both Fock spaces of one algebra.
#[derive(Clone, Debug)]
pub struct FockData {
    pub pairing: NeutralPairing,
    /// Basis indices of Δ_{>0} root vectors, in charged-root order.
    pub pos_basis: Vec<usize>,
    pub pos_root: Vec<usize>,
    /// Parity of u_α for α ∈ Δ_{>0}.
    pub pos_odd: Vec<bool>,
    neutral_coord: Vec<Coord>,
    pos_coord: Vec<Coord>,
    delta: Coord,
}

impl FockData {
    pub fn new(data: &SuperalgebraData, pairing: NeutralPairing) -> Self {
        let pos_basis = data.positive_part();
        let pos_root: Vec<usize> = pos_basis.iter().map(|&b| data.root_of(b).unwrap()).collect();
        let pos_odd = pos_basis.iter().map(|&b| data.parity[b]).collect();
        let th = &data.root_coords[data.theta];
        let mut delta = ZERO_COORD;
        delta[0] = 1;
        for i in 0..data.h_dim {
            delta[i + 1] = th[i] as i32;
        }
        let root_coord = |r: usize| -> Coord {
            let mut c = ZERO_COORD;
            for (i, v) in data.root_coords[r].iter().enumerate() {
                c[i + 1] = *v as i32;
            }
            c
        };
        let neutral_coord = pairing
            .basis_half
            .iter()
            .map(|&b| root_coord(data.root_of(b).unwrap()))
            .collect();
        let pos_coord = pos_root.iter().map(|&r| root_coord(r)).collect();
        FockData {
            pairing,
            pos_basis,
            pos_root,
            pos_odd,
            neutral_coord,
            pos_coord,
            delta,
        }
    }

    pub fn neutral(&self, idx: usize, mode: i64) -> NeutralGen {
        NeutralGen {
            mode: mode as i16,
            idx: idx as u8,
            odd: self.pairing.odd,
        }
    }

    pub fn psi(&self, root: usize, mode: i64) -> ChargedGen {
        ChargedGen {
            upper: false,
            root: root as u8,
            mode: mode as i16,
            odd: !self.pos_odd[root],
        }
    }

    pub fn psi_dual(&self, root: usize, mode: i64) -> ChargedGen {
        ChargedGen {
            upper: true,
            root: root as u8,
            mode: mode as i16,
            odd: !self.pos_odd[root],
        }
    }

    /// [Φ_a(m), Φ_b(n)] = ⟨u_a|u_b⟩_ne δ_{m+n,−1}.
    pub fn neutral_contract(&self, g: NeutralGen, y: NeutralGen) -> Q {
        if g.mode as i32 + y.mode as i32 == -1 {
            self.pairing.gram[g.idx as usize][y.idx as usize].clone()
        } else {
            Q::zero()
        }
    }

    /// [ψ_α(m), ψ^β(n)] = δδ and [ψ^β(n), ψ_α(m)] = −(−1)^{p_ψ} δδ.
    pub fn charged_contract(&self, g: ChargedGen, y: ChargedGen) -> Q {
        if g.root != y.root || g.upper == y.upper || g.mode as i32 + y.mode as i32 != 0 {
            return Q::zero();
        }
        if !g.upper || g.odd {
            Q::from_integer(1.into())
        } else {
            Q::from_integer((-1).into())
        }
    }

    pub fn neutral_apply(&self, g: NeutralGen, w: &[NeutralGen]) -> Vec<(NeutralWord, Q)> {
        fock_apply(g, w, |a, b| self.neutral_contract(a, b))
    }

    pub fn charged_apply(&self, g: ChargedGen, w: &[ChargedGen]) -> Vec<(ChargedWord, Q)> {
        fock_apply(g, w, |a, b| self.charged_contract(a, b))
    }

    /// −(weight) of a neutral generator: −(α + nδ).
    pub fn neutral_neg_coord(&self, g: NeutralGen) -> Coord {
        let a = self.neutral_coord[g.idx as usize];
        let n = g.mode as i32;
        coord_sub(&scale(&self.delta, -n), &a)
    }

    /// −(weight) of ψ_α(n) (α + nδ) or ψ^α(n) (−α + nδ).
    pub fn charged_neg_coord(&self, g: ChargedGen) -> Coord {
        let a = self.pos_coord[g.root as usize];
        let n = g.mode as i32;
        let d = scale(&self.delta, -n);
        if g.upper {
            coord_add(&d, &a)
        } else {
            coord_sub(&d, &a)
        }
    }

    pub fn neutral_word_coord(&self, w: &[NeutralGen]) -> Coord {
        w.iter().fold(ZERO_COORD, |acc, g| coord_add(&acc, &self.neutral_neg_coord(*g)))
    }

    pub fn charged_word_coord(&self, w: &[ChargedGen]) -> Coord {
        w.iter().fold(ZERO_COORD, |acc, g| coord_add(&acc, &self.charged_neg_coord(*g)))
    }

    /// All neutral creators whose negative weight fits under `bound`.
    fn neutral_creators(&self, bound: &Coord) -> Vec<NeutralGen> {
        let mut out = Vec::new();
        for idx in 0..self.pairing.len() {
            let mut n = -1i64;
            loop {
                let g = self.neutral(idx, n);
                let c = self.neutral_neg_coord(g);
                if c[0] > bound[0] {
                    break;
                }
                if coord_nonneg(&coord_sub(bound, &c)) {
                    out.push(g);
                }
                n -= 1;
            }
        }
        out.sort();
        out
    }

    fn charged_creators(&self, bound: &Coord) -> Vec<ChargedGen> {
        let mut out = Vec::new();
        for r in 0..self.pos_basis.len() {
            for upper in [false, true] {
                let mut n: i64 = if upper { 0 } else { -1 };
                loop {
                    let g = if upper { self.psi_dual(r, n) } else { self.psi(r, n) };
                    let c = self.charged_neg_coord(g);
                    if c[0] > bound[0] {
                        break;
                    }
                    if coord_nonneg(&coord_sub(bound, &c)) {
                        out.push(g);
                    }
                    n -= 1;
                }
            }
        }
        out.sort();
        out
    }

    /// Neutral words with negative weight ≤ `bound`, grouped by exact weight.
    pub fn neutral_words_below(&self, bound: &Coord) -> BTreeMap<Coord, Vec<NeutralWord>> {
        let gens = self.neutral_creators(bound);
        let coords: Vec<Coord> = gens.iter().map(|g| self.neutral_neg_coord(*g)).collect();
        words_below(&gens, &coords, bound)
    }

    pub fn charged_words_below(&self, bound: &Coord) -> BTreeMap<Coord, Vec<ChargedWord>> {
        let gens = self.charged_creators(bound);
        let coords: Vec<Coord> = gens.iter().map(|g| self.charged_neg_coord(*g)).collect();
        words_below(&gens, &coords, bound)
    }
}

fn scale(c: &Coord, s: i32) -> Coord {
    [c[0] * s, c[1] * s, c[2] * s]
}

fn words_below<G: FockGenerator>(gens: &[G], coords: &[Coord], bound: &Coord) -> BTreeMap<Coord, Vec<Vec<G>>> {
    let mut out: BTreeMap<Coord, Vec<Vec<G>>> = BTreeMap::new();
    let mut cur = Vec::new();
    #[allow(clippy::too_many_arguments)]
    fn rec<G: FockGenerator>(
        start: usize,
        acc: Coord,
        gens: &[G],
        coords: &[Coord],
        bound: &Coord,
        cur: &mut Vec<G>,
        out: &mut BTreeMap<Coord, Vec<Vec<G>>>,
    ) {
        out.entry(acc).or_default().push(cur.clone());
        for i in start..gens.len() {
            let next = coord_add(&acc, &coords[i]);
            if !coord_nonneg(&coord_sub(bound, &next)) {
                continue;
            }
            cur.push(gens[i]);
            rec(if gens[i].odd() { i + 1 } else { i }, next, gens, coords, bound, cur, out);
            cur.pop();
        }
    }
    rec(0, ZERO_COORD, gens, coords, bound, &mut cur, &mut out);
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FockSpace {
    Neutral,
    Charged,
}

/// Graded dimensions keyed by (negative weight, ghost degree); degree is 0 for the neutral space.
pub fn fock_character(fd: &FockData, space: FockSpace, bound: &Coord) -> BTreeMap<(Coord, i32), i64> {
    let mut out = BTreeMap::new();
    match space {
        FockSpace::Neutral => {
            for (c, ws) in fd.neutral_words_below(bound) {
                *out.entry((c, 0)).or_insert(0) += ws.len() as i64;
            }
        }
        FockSpace::Charged => {
            for (c, ws) in fd.charged_words_below(bound) {
                for w in ws {
                    *out.entry((c, ghost_degree(&w))).or_insert(0) += 1;
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use crate::superalgebra::{build_algebra, neutral_pairing};

    fn fd(name: &str) -> (SuperalgebraData, FockData) {
        let a = build_algebra(name).unwrap();
        let p = neutral_pairing(&a).unwrap();
        let f = FockData::new(&a, p);
        (a, f)
    }

    #[test]
    fn neutral_vacuum_is_annihilated() {
        let (_, f) = fd("spo21");
        assert!(f.neutral_apply(f.neutral(0, 0), &[]).is_empty());
    }

    #[test]
    fn neutral_single_contraction() {
        let (_, f) = fd("spo21");
        let w = vec![f.neutral(0, -1)];
        let r = f.neutral_apply(f.neutral(0, 0), &w);
        assert_eq!(r, vec![(vec![], f.pairing.gram[0][0].clone())]);
    }

    #[test]
    fn bosonic_neutral_repetition() {
        let (_, f) = fd("sl3");
        let g = f.neutral(0, -1);
        let w = f.neutral_apply(g, &[g]);
        assert_eq!(w, vec![(vec![g, g], q(1))]);
    }

    #[test]
    fn odd_neutral_square_vanishes() {
        let (_, f) = fd("spo21");
        let g = f.neutral(0, -1);
        assert!(f.neutral_apply(g, &[g]).is_empty());
    }

    #[test]
    fn charged_vacuum_and_contraction() {
        let (a, f) = fd("sl2");
        let t = f.pos_root.iter().position(|&r| r == a.theta).unwrap();
        assert!(f.charged_apply(f.psi(t, 0), &[]).is_empty());
        assert!(f.charged_apply(f.psi_dual(t, 1), &[]).is_empty());
        let w = vec![f.psi(t, -1)];
        assert_eq!(f.charged_apply(f.psi_dual(t, 1), &w), vec![(vec![], q(1))]);
        let c = f.charged_apply(f.psi_dual(t, 0), &[]);
        assert_eq!(ghost_degree(&c[0].0), 1);
    }

    #[test]
    fn charged_top_t_weight_has_two_states() {
        for name in crate::superalgebra::SUPPORTED {
            let (_, f) = fd(name);
            let ch = fock_character(&f, FockSpace::Charged, &[4, 4, 4]);
            let top: i64 = ch
                .iter()
                .filter(|((c, _), _)| c[1] == 0 && c[2] == 0)
                .filter(|((c, _), _)| c[0] <= 4)
                .map(|(_, v)| *v)
                .sum();
            assert_eq!(top, 2, "{name}");
        }
    }

    #[test]
    fn neutral_vacuum_weight() {
        for name in crate::superalgebra::SUPPORTED {
            let (_, f) = fd(name);
            let ch = fock_character(&f, FockSpace::Neutral, &[3, 3, 3]);
            assert_eq!(ch.get(&(ZERO_COORD, 0)), Some(&1));
        }
    }

    #[test]
    fn sl2_single_upper_ghost() {
        let (a, f) = fd("sl2");
        // ψ^θ(0): weight −θ, i.e. negative weight α_1.
        let ch = fock_character(&f, FockSpace::Charged, &[0, 1, 0]);
        assert_eq!(ch.get(&([0, 1, 0], 1)), Some(&1));
        let _ = a;
    }
}
