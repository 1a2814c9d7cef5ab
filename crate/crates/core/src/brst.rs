//! The complex C(V) = V ⊗ F^ne(χ) ⊗ F(Lg_{>0}) and its differential.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::category_o::{window_coords, AffMode, HighestWeightModule, TruncationWindow};
use crate::error::{MiniwError, Result};
use crate::fock::{ghost_degree, word_parity, ChargedGen, ChargedWord, FockData, NeutralGen, NeutralWord};
use crate::linalg::SparseRationalMatrix;
use crate::rational::{half, LinComb, Q};
use crate::superalgebra::{neutral_pairing, SuperalgebraData};
use crate::weights::{coord_add, coord_dw, coord_nonneg, coord_sub, Coord, ZERO_COORD};

/// One basis vector v ⊗ φ ⊗ ψ. `v` indexes the basis of V at `v_coord`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChainState {
    pub v_coord: Coord,
    pub v: u32,
    pub neutral: NeutralWord,
    pub charged: ChargedWord,
}

impl ChainState {
    pub fn degree(&self) -> i32 {
        ghost_degree(&self.charged)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Part {
    Full,
    Chi,
    St,
}

type Chain = LinComb<ChainState>;

struct CubicTerm {
    a: usize,
    b: usize,
    g: usize,
    coeff: Q,
}

type WordsByCoord<W> = BTreeMap<Coord, Vec<W>>;

pub struct BrstComplex<'a> {
    pub module: HighestWeightModule<'a>,
    pub fock: FockData,
    half_idx: Vec<Option<usize>>,
    cubic: Vec<CubicTerm>,
    chi_terms: Vec<(usize, Q)>,
    simple_odd: Vec<bool>,
    neutral_cache: RefCell<HashMap<Coord, Rc<WordsByCoord<NeutralWord>>>>,
    charged_cache: RefCell<HashMap<Coord, Rc<WordsByCoord<ChargedWord>>>>,
}

fn sign(odd: bool) -> Q {
    if odd {
        -Q::one()
    } else {
        Q::one()
    }
}

impl<'a> BrstComplex<'a> {
    pub fn new(module: HighestWeightModule<'a>) -> Result<Self> {
        let data = module.data();
        let fock = FockData::new(data, neutral_pairing(data)?);
        let half_idx = fock
            .pos_basis
            .iter()
            .map(|b| fock.pairing.basis_half.iter().position(|h| h == b))
            .collect();
        let np = fock.pos_basis.len();
        let mut cubic = Vec::new();
        for a in 0..np {
            for b in 0..np {
                let br = data.bracket(fock.pos_basis[a], fock.pos_basis[b]).clone();
                if br.is_empty() {
                    continue;
                }
                for g in 0..np {
                    let neg = data.basis_of_root(data.neg_root[fock.pos_root[g]]);
                    let n = data.form_vec(&br, &vec![(neg, Q::one())]);
                    if n.is_zero() {
                        continue;
                    }
                    let s = sign(fock.pos_odd[a] && fock.pos_odd[g]);
                    cubic.push(CubicTerm {
                        a,
                        b,
                        g,
                        coeff: -(half() * s * n),
                    });
                }
            }
        }
        let one = Q::one();
        let chi_terms = (0..np)
            .filter(|&r| data.grading[fock.pos_basis[r]] == one)
            .map(|r| (r, sign(fock.pos_odd[r]) * data.chi(fock.pos_basis[r])))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        let simple_odd = data.simple_roots.iter().map(|&s| data.root_parity[s]).collect();
        Ok(BrstComplex {
            module,
            fock,
            half_idx,
            cubic,
            chi_terms,
            simple_odd,
            neutral_cache: RefCell::new(HashMap::new()),
            charged_cache: RefCell::new(HashMap::new()),
        })
    }

    pub fn data(&self) -> &SuperalgebraData {
        self.module.data()
    }

    fn v_parity(&self, c: &Coord) -> bool {
        self.simple_odd
            .iter()
            .enumerate()
            .filter(|(_, o)| **o)
            .map(|(i, _)| c[i + 1])
            .sum::<i32>()
            .rem_euclid(2)
            == 1
    }

    fn neutral_words(&self, bound: &Coord) -> Rc<BTreeMap<Coord, Vec<NeutralWord>>> {
        if let Some(w) = self.neutral_cache.borrow().get(bound) {
            return w.clone();
        }
        let w = Rc::new(self.fock.neutral_words_below(bound));
        self.neutral_cache.borrow_mut().insert(*bound, w.clone());
        w
    }

    fn charged_words(&self, bound: &Coord) -> Rc<BTreeMap<Coord, Vec<ChargedWord>>> {
        if let Some(w) = self.charged_cache.borrow().get(bound) {
            return w.clone();
        }
        let w = Rc::new(self.fock.charged_words_below(bound));
        self.charged_cache.borrow_mut().insert(*bound, w.clone());
        w
    }

    /// All states of total weight λ−β and ghost degree `degree`, sorted.
    pub fn complex_basis(&self, beta: &Coord, degree: i32) -> Vec<ChainState> {
        let mut out = Vec::new();
        if !coord_nonneg(beta) {
            return out;
        }
        let charged = self.charged_words(beta);
        let neutral = self.neutral_words(beta);
        for (cc, cws) in charged.iter() {
            let rem = coord_sub(beta, cc);
            if !coord_nonneg(&rem) {
                continue;
            }
            let cws: Vec<&ChargedWord> = cws.iter().filter(|w| ghost_degree(w) == degree).collect();
            if cws.is_empty() {
                continue;
            }
            for (nc, nws) in neutral.iter() {
                let vc = coord_sub(&rem, nc);
                if !coord_nonneg(&vc) {
                    continue;
                }
                let dim = self.module.dim(&vc);
                for nw in nws {
                    for cw in &cws {
                        for v in 0..dim {
                            out.push(ChainState {
                                v_coord: vc,
                                v: v as u32,
                                neutral: nw.clone(),
                                charged: (*cw).clone(),
                            });
                        }
                    }
                }
            }
        }
        out.sort();
        out
    }

    /// Negative total weight of a state.
    pub fn state_coord(&self, s: &ChainState) -> Coord {
        coord_add(
            &coord_add(&s.v_coord, &self.fock.neutral_word_coord(&s.neutral)),
            &self.fock.charged_word_coord(&s.charged),
        )
    }

    fn apply_mode(&self, x: AffMode, s: &ChainState, c: &Q, out: &mut Chain) {
        let target = coord_add(&s.v_coord, &self.module.verma.lie.neg_coord(x));
        for (j, a) in self.module.act(x, &s.v_coord, s.v as usize) {
            out.add_term(
                ChainState {
                    v_coord: target,
                    v: j as u32,
                    neutral: s.neutral.clone(),
                    charged: s.charged.clone(),
                },
                a * c,
            );
        }
    }

    fn apply_neutral(&self, g: NeutralGen, s: &ChainState) -> Vec<(ChainState, Q)> {
        let sg = sign(g.odd && self.v_parity(&s.v_coord));
        self.fock
            .neutral_apply(g, &s.neutral)
            .into_iter()
            .map(|(w, c)| {
                (
                    ChainState {
                        v_coord: s.v_coord,
                        v: s.v,
                        neutral: w,
                        charged: s.charged.clone(),
                    },
                    c * &sg,
                )
            })
            .collect()
    }

    fn apply_charged(&self, g: ChargedGen, s: &ChainState) -> Vec<(ChainState, Q)> {
        let sg = sign(g.odd && (self.v_parity(&s.v_coord) ^ word_parity(&s.neutral)));
        self.fock
            .charged_apply(g, &s.charged)
            .into_iter()
            .map(|(w, c)| {
                (
                    ChainState {
                        v_coord: s.v_coord,
                        v: s.v,
                        neutral: s.neutral.clone(),
                        charged: w,
                    },
                    c * &sg,
                )
            })
            .collect()
    }

    fn has_charged(s: &ChainState, upper: bool, root: usize, mode: i64) -> bool {
        s.charged
            .iter()
            .any(|g| g.upper == upper && g.root as usize == root && g.mode as i64 == mode)
    }

    /// d, d^χ or d^st applied to one state.
    pub fn apply_d(&self, s: &ChainState, part: Part) -> Chain {
        let mut out = Chain::new();
        let np = self.fock.pos_basis.len();
        let st = part != Part::Chi;
        let chi = part != Part::St;
        if st {
            // (−1)^{p(α)} u_α(−n) ψ^α(n)
            for r in 0..np {
                let sa = sign(self.fock.pos_odd[r]);
                let b = self.fock.pos_basis[r];
                let mut ns: Vec<i64> = s
                    .charged
                    .iter()
                    .filter(|g| !g.upper && g.root as usize == r)
                    .map(|g| -(g.mode as i64))
                    .collect();
                ns.extend(-(s.v_coord[0] as i64)..=0);
                ns.sort();
                ns.dedup();
                for n in ns {
                    for (t, c) in self.apply_charged(self.fock.psi_dual(r, n), s) {
                        self.apply_mode(AffMode::new(b, -n), &t, &(c * &sa), &mut out);
                    }
                }
            }
        }
        // (−1)^{p(α)} Φ_α(−n) ψ^α(n), α ∈ Δ_½
        for r in 0..np {
            let Some(a) = self.half_idx[r] else { continue };
            let sa = sign(self.fock.pos_odd[r]);
            let mut ns: Vec<i64> = Vec::new();
            if st {
                ns.extend(
                    s.charged
                        .iter()
                        .filter(|g| !g.upper && g.root as usize == r)
                        .map(|g| -(g.mode as i64)),
                );
            }
            if chi {
                ns.extend(s.neutral.iter().map(|g| g.mode as i64 + 1).filter(|&n| n <= 0));
            }
            ns.sort();
            ns.dedup();
            for n in ns {
                for (t, c) in self.apply_charged(self.fock.psi_dual(r, n), s) {
                    for (u, c2) in self.apply_neutral(self.fock.neutral(a, -n), &t) {
                        out.add_term(u, c2 * &c * &sa);
                    }
                }
            }
        }
        if chi {
            // (−1)^{p(α)} χ(u_α(−1)) ψ^α(1), α ∈ Δ_1
            for (r, c0) in &self.chi_terms {
                if Self::has_charged(s, false, *r, -1) {
                    for (t, c) in self.apply_charged(self.fock.psi_dual(*r, 1), s) {
                        out.add_term(t, c * c0);
                    }
                }
            }
        }
        if st {
            self.apply_cubic(s, &mut out);
        }
        out
    }

    fn apply_cubic(&self, s: &ChainState, out: &mut Chain) {
        let amax = s.charged.iter().map(|g| (g.mode as i64).abs()).max().unwrap_or(0);
        let lo = -2 * amax - 1;
        let hi = 2 * amax + 1;
        for t in &self.cubic {
            for k in lo..=hi {
                if k >= 1 && !Self::has_charged(s, false, t.a, -k) {
                    continue;
                }
                for l in lo..=hi {
                    if l >= 1 && !Self::has_charged(s, false, t.b, -l) {
                        continue;
                    }
                    let m = -k - l;
                    if m >= 0 && !Self::has_charged(s, true, t.g, -m) {
                        continue;
                    }
                    for (s1, c1) in self.apply_charged(self.fock.psi(t.g, m), s) {
                        for (s2, c2) in self.apply_charged(self.fock.psi_dual(t.b, l), &s1) {
                            for (s3, c3) in self.apply_charged(self.fock.psi_dual(t.a, k), &s2) {
                                out.add_term(s3, &t.coeff * &c1 * &c2 * c3);
                            }
                        }
                    }
                }
            }
        }
    }

    pub fn apply_d_chain(&self, v: &Chain, part: Part) -> Chain {
        let mut out = Chain::new();
        for (s, c) in v.iter() {
            out.add_scaled(&self.apply_d(s, part), c);
        }
        out
    }

    /// J^{(v)}(n) = v(n) + Σ (−1)^{p(γ)} ([v,u_β]|u_{−γ}) :ψ_γ ψ^β:(n) on one state.
    pub fn apply_j(&self, v: usize, n: i64, s: &ChainState) -> Chain {
        let data = self.data();
        let mut out = Chain::new();
        self.apply_mode(AffMode::new(v, n), s, &Q::one(), &mut out);
        let np = self.fock.pos_basis.len();
        let amax = s.charged.iter().map(|g| (g.mode as i64).abs()).max().unwrap_or(0) + n.abs() + 1;
        for b in 0..np {
            let br = data.bracket(v, self.fock.pos_basis[b]).clone();
            if br.is_empty() {
                continue;
            }
            for g in 0..np {
                let neg = data.basis_of_root(data.neg_root[self.fock.pos_root[g]]);
                let c = data.form_vec(&br, &vec![(neg, Q::one())]);
                if c.is_zero() {
                    continue;
                }
                let c = c * sign(self.fock.pos_odd[g]);
                for k in -amax..=amax {
                    let l = n - k;
                    let pg = self.fock.psi(g, k);
                    let pb = self.fock.psi_dual(b, l);
                    if k >= 0 {
                        // :ψ_γ(k)ψ^β(l): = ± ψ^β(l) ψ_γ(k)
                        let sg = sign(pg.odd && pb.odd);
                        for (s1, c1) in self.apply_charged(pg, s) {
                            for (s2, c2) in self.apply_charged(pb, &s1) {
                                out.add_term(s2, &c * &sg * &c1 * c2);
                            }
                        }
                    } else {
                        for (s1, c1) in self.apply_charged(pb, s) {
                            for (s2, c2) in self.apply_charged(pg, &s1) {
                                out.add_term(s2, &c * &c1 * c2);
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// Matrix of `op` from `cols` into the span of `rows`; fails if a target leaves `rows`.
    pub fn matrix_of(
        &self,
        cols: &[ChainState],
        rows: &[ChainState],
        op: impl Fn(&ChainState) -> Chain,
    ) -> Result<SparseRationalMatrix> {
        let index: HashMap<&ChainState, usize> = rows.iter().enumerate().map(|(i, s)| (s, i)).collect();
        let mut columns = Vec::with_capacity(cols.len());
        for s in cols {
            let mut col: Vec<(usize, Q)> = Vec::new();
            for (t, c) in op(s).into_iter_terms() {
                let i = *index
                    .get(&t)
                    .ok_or_else(|| MiniwError::WindowOverflow(format!("image state {t:?} outside the row basis")))?;
                col.push((i, c));
            }
            col.sort_by_key(|(i, _)| *i);
            columns.push(col);
        }
        Ok(SparseRationalMatrix::from_columns(rows.len(), columns))
    }

    /// Matrix of J^{(v)}(n) from the block (β, i) to (β + wt, i).
    pub fn j_current(&self, v: usize, n: i64, beta: &Coord, degree: i32) -> Result<SparseRationalMatrix> {
        let lie = &self.module.verma.lie;
        let target = coord_add(beta, &lie.neg_coord(AffMode::new(v, n)));
        let cols = self.complex_basis(beta, degree);
        let rows = self.complex_basis(&target, degree);
        self.matrix_of(&cols, &rows, |s| self.apply_j(v, n, s))
    }

    /// States of the ξ-class of `beta0` with chain index n ≤ `chain`.
    pub fn xi_basis(&self, beta0: &Coord, chain: u32, degree: i32) -> Vec<ChainState> {
        let mut out = Vec::new();
        for n in 0..=chain as i32 {
            let mut b = *beta0;
            b[0] += n;
            out.extend(self.complex_basis(&b, degree));
        }
        out
    }

    /// dim H^i of the chain-truncated ξ-complex, for each i in `degrees`.
    pub fn truncated_cohomology(&self, beta0: &Coord, chain: u32, degrees: &[i32]) -> Result<BTreeMap<i32, usize>> {
        let lo = *degrees.iter().min().unwrap_or(&0) - 1;
        let hi = *degrees.iter().max().unwrap_or(&0) + 1;
        let bases: BTreeMap<i32, Vec<ChainState>> = (lo..=hi).map(|i| (i, self.xi_basis(beta0, chain, i))).collect();
        let mut ranks: BTreeMap<i32, usize> = BTreeMap::new();
        for i in lo..hi {
            let m = self.matrix_of(&bases[&i], &bases[&(i + 1)], |s| self.apply_d(s, Part::Full))?;
            ranks.insert(i, m.rank());
        }
        Ok(degrees
            .iter()
            .map(|&i| (i, bases[&i].len() - ranks[&i] - ranks[&(i - 1)]))
            .collect())
    }
}

/// Result of one stabilized cohomology computation.
#[derive(Clone, Debug, Serialize)]
pub struct CohomologyReport {
    pub beta0: Coord,
    #[serde(serialize_with = "crate::weights::ser_q")]
    pub dw_offset: Q,
    pub dims: BTreeMap<i32, usize>,
    pub stabilized: bool,
    /// Chain lengths tried, with their dims.
    pub history: Vec<(u32, BTreeMap<i32, usize>)>,
    pub chain: u32,
}

/// Smallest chain length accepted as a starting point at D^W-offset `offset`.
pub fn min_chain(offset: &Q) -> u32 {
    crate::rational::to_i64(&offset.ceil()).unwrap_or(0).max(0) as u32 + 1
}

/// Increases the chain from `start` (at least [`min_chain`]) until three consecutive
/// truncations agree, up to `max_chain`.
pub fn cohomology_dims(
    cx: &BrstComplex,
    beta0: &Coord,
    degrees: &[i32],
    start: u32,
    max_chain: u32,
) -> Result<CohomologyReport> {
    let dw_offset = coord_dw(cx.data(), beta0);
    let start = start.max(min_chain(&dw_offset));
    let max_chain = max_chain.max(start + 2);
    let mut history: Vec<(u32, BTreeMap<i32, usize>)> = Vec::new();
    let mut chain = start;
    loop {
        let dims = cx.truncated_cohomology(beta0, chain, degrees)?;
        history.push((chain, dims));
        let n = history.len();
        if n >= 3 && history[n - 1].1 == history[n - 2].1 && history[n - 2].1 == history[n - 3].1 {
            let dims = history[n - 1].1.clone();
            check_degree_bound(&dims, &dw_offset)?;
            return Ok(CohomologyReport {
                beta0: *beta0,
                dw_offset,
                dims,
                stabilized: true,
                history,
                chain: chain - 2,
            });
        }
        if chain >= max_chain {
            return Err(MiniwError::NotStabilized(format!(
                "chain {start}..={max_chain}: {:?}",
                history.iter().map(|(l, d)| (*l, d.clone())).collect::<Vec<_>>()
            )));
        }
        chain += 1;
    }
}

/// H^i_ξ = 0 whenever ½|i| exceeds the D^W offset.
fn check_degree_bound(dims: &BTreeMap<i32, usize>, offset: &Q) -> Result<()> {
    for (i, d) in dims {
        if *d != 0 && Q::from_integer((*i).abs().into()) * half() > *offset {
            return Err(MiniwError::BadData(format!(
                "H^{i} has dimension {d} beyond the degree bound at offset {offset}"
            )));
        }
    }
    Ok(())
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct NilpotencyReport {
    pub weights: usize,
    pub states: usize,
    pub max_residual: String,
    pub boundary_skipped: usize,
}

/// Checks d² = (d^χ)² = (d^st)² = {d^χ,d^st} = 0 on every state of every weight in `window`.
pub fn verify_nilpotency(cx: &BrstComplex, window: &TruncationWindow, degrees: &[i32]) -> Result<NilpotencyReport> {
    let mut rep = NilpotencyReport {
        max_residual: "0".into(),
        ..Default::default()
    };
    for beta in window_coords(cx.data(), window) {
        rep.weights += 1;
        for &i in degrees {
            for s in cx.complex_basis(&beta, i) {
                rep.states += 1;
                let one = Chain::single(s.clone(), Q::one());
                let chi = cx.apply_d_chain(&one, Part::Chi);
                let st = cx.apply_d_chain(&one, Part::St);
                let full = cx.apply_d_chain(&one, Part::Full);
                let chi2 = cx.apply_d_chain(&chi, Part::Chi);
                let st2 = cx.apply_d_chain(&st, Part::St);
                let mut anti = cx.apply_d_chain(&chi, Part::St);
                anti.add_scaled(&cx.apply_d_chain(&st, Part::Chi), &Q::one());
                let full2 = cx.apply_d_chain(&full, Part::Full);
                for (name, r) in [("d^2", &full2), ("(d^chi)^2", &chi2), ("(d^st)^2", &st2), ("{d^chi,d^st}", &anti)] {
                    if !r.is_zero() {
                        return Err(MiniwError::NilpotencyViolation(format!(
                            "{name} on {s:?} at {beta:?}: {} terms, max {}",
                            r.len(),
                            r.max_abs()
                        )));
                    }
                }
            }
        }
    }
    Ok(rep)
}

/// The ghost-free top state v_λ ⊗ 1 ⊗ 1.
pub fn vacuum_state() -> ChainState {
    ChainState {
        v_coord: ZERO_COORD,
        v: 0,
        neutral: Vec::new(),
        charged: Vec::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category_o::ModuleKind;
    use crate::superalgebra::build_algebra;
    use crate::weights::parse_lambda;

    fn cx<'a>(data: &'a SuperalgebraData, lam: &str, kind: ModuleKind) -> BrstComplex<'a> {
        let l = parse_lambda(data, lam).unwrap();
        BrstComplex::new(HighestWeightModule::new(data, l, kind)).unwrap()
    }

    #[test]
    fn d_kills_vacuum() {
        for name in crate::superalgebra::SUPPORTED {
            let a = build_algebra(name).unwrap();
            let c = cx(&a, "k=1/3; x=1/5", ModuleKind::Verma);
            assert!(c.apply_d(&vacuum_state(), Part::Full).is_zero(), "{name}");
        }
    }

    #[test]
    fn top_block_shape() {
        let a = build_algebra("sl2").unwrap();
        let c = cx(&a, "k=1/3; x=1/5", ModuleKind::Verma);
        assert_eq!(c.complex_basis(&ZERO_COORD, 0).len(), 1);
        assert!(c.complex_basis(&ZERO_COORD, 2).is_empty());
        assert_eq!(c.complex_basis(&[1, 0, 0], 0).len(), 1);
    }

    #[test]
    fn sl2_nilpotent_small() {
        let a = build_algebra("sl2").unwrap();
        let c = cx(&a, "k=1/3; x=1/5", ModuleKind::Verma);
        verify_nilpotency(&c, &TruncationWindow::new(2, 2, 2), &[-2, -1, 0, 1]).unwrap();
    }

    #[test]
    fn spo21_nilpotent_small() {
        let a = build_algebra("spo21").unwrap();
        let c = cx(&a, "k=1/3; x=1/5", ModuleKind::Verma);
        verify_nilpotency(&c, &TruncationWindow::new(1, 2, 1), &[-2, -1, 0, 1]).unwrap();
    }
}
