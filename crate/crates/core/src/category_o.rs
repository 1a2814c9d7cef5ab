//! Highest-weight modules of the affinization: Verma modules by PBW
//! straightening, their simple quotients weight by weight, characters, and
//! the two small homology computations along the top t-weight.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{MiniwError, Result};
use crate::linalg::{rref_dense, SparseRationalMatrix};
use crate::rational::{half, koszul, q, LinComb, Q};
use crate::superalgebra::SuperalgebraData;
use crate::weights::{alpha0_pairing, coord_add, coord_nonneg, coord_sub, AffineWeight, Coord, ZERO_COORD};

/// A mode `u_b(-depth)` of n̂_−. Ordering is the PBW order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mode {
    pub depth: i16,
    pub height: i16,
    pub basis: u16,
}

/// An arbitrary mode `u_b(m)` of the loop algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffMode {
    pub basis: u16,
    pub m: i16,
}

impl AffMode {
    pub fn new(basis: usize, m: i64) -> Self {
        AffMode {
            basis: basis as u16,
            m: m as i16,
        }
    }
}

/// A PBW monomial `y_1 y_2 ... y_k v_λ` with `y_1 ≤ y_2 ≤ ...`.
pub type Word = Vec<Mode>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct TruncationWindow {
    pub depth: u32,
    pub height: u32,
    pub chain: u32,
}

impl TruncationWindow {
    pub fn new(depth: u32, height: u32, chain: u32) -> Self {
        TruncationWindow { depth, height, chain }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ModuleKind {
    Verma,
    Simple,
}

impl std::str::FromStr for ModuleKind {
    type Err = MiniwError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "verma" => Ok(ModuleKind::Verma),
            "simple" => Ok(ModuleKind::Simple),
            other => Err(MiniwError::InvalidConfig {
                field: "which".into(),
                reason: format!("expected verma or simple, got {other:?}"),
            }),
        }
    }
}

/// Mode-level bookkeeping shared by the module and complex code.
#[derive(Clone, Debug)]
pub struct LoopAlgebra<'a> {
    pub data: &'a SuperalgebraData,
    theta_coords: Vec<i64>,
}

impl<'a> LoopAlgebra<'a> {
    pub fn new(data: &'a SuperalgebraData) -> Self {
        LoopAlgebra {
            data,
            theta_coords: data.root_coords[data.theta].clone(),
        }
    }

    /// −(weight of u_b(m)) in affine simple-root coordinates.
    pub fn neg_coord(&self, x: AffMode) -> Coord {
        let d = -(x.m as i64);
        let cb = self.data.coords_of(x.basis as usize);
        let mut c = ZERO_COORD;
        c[0] = d as i32;
        for i in 0..self.data.h_dim {
            c[i + 1] = (d * self.theta_coords[i] - cb[i]) as i32;
        }
        c
    }

    pub fn is_lowering(&self, x: AffMode) -> bool {
        x.m < 0 || (x.m == 0 && self.data.root_of(x.basis as usize).is_some_and(|r| !self.data.positive[r]))
    }

    pub fn is_raising(&self, x: AffMode) -> bool {
        x.m > 0 || (x.m == 0 && self.data.root_of(x.basis as usize).is_some_and(|r| self.data.positive[r]))
    }

    pub fn to_mode(&self, x: AffMode) -> Mode {
        debug_assert!(self.is_lowering(x));
        Mode {
            depth: -x.m,
            height: self.data.height_of(x.basis as usize) as i16,
            basis: x.basis,
        }
    }

    pub fn to_aff(&self, y: Mode) -> AffMode {
        AffMode {
            basis: y.basis,
            m: -y.depth,
        }
    }

    pub fn odd(&self, b: u16) -> bool {
        self.data.parity[b as usize]
    }

    /// All lowering modes whose negative weight lies below `beta`.
    pub fn lowering_modes_below(&self, beta: &Coord) -> Vec<Mode> {
        let mut out = Vec::new();
        for d in 0..=beta[0].max(0) {
            for b in 0..self.data.dim {
                let x = AffMode::new(b, -(d as i64));
                if !self.is_lowering(x) {
                    continue;
                }
                if coord_nonneg(&coord_sub(beta, &self.neg_coord(x))) {
                    out.push(self.to_mode(x));
                }
            }
        }
        out.sort();
        out
    }

    /// Words of total negative weight `beta` built from `modes`
    /// (sorted), odd modes used at most once.
    pub fn words_of_weight(&self, beta: &Coord, modes: &[Mode]) -> Vec<Word> {
        let coords: Vec<Coord> = modes.iter().map(|&m| self.neg_coord(self.to_aff(m))).collect();
        let odd: Vec<bool> = modes.iter().map(|m| self.odd(m.basis)).collect();
        let mut out = Vec::new();
        let mut cur = Vec::new();
        fn rec(
            start: usize,
            rem: Coord,
            modes: &[Mode],
            coords: &[Coord],
            odd: &[bool],
            cur: &mut Word,
            out: &mut Vec<Word>,
        ) {
            if rem == ZERO_COORD {
                out.push(cur.clone());
                return;
            }
            for i in start..modes.len() {
                let r = coord_sub(&rem, &coords[i]);
                if !coord_nonneg(&r) {
                    continue;
                }
                cur.push(modes[i]);
                rec(if odd[i] { i + 1 } else { i }, r, modes, coords, odd, cur, out);
                cur.pop();
            }
        }
        rec(0, *beta, modes, &coords, &odd, &mut cur, &mut out);
        out
    }
}

type IndexedBasis = (Vec<Word>, HashMap<Word, usize>);

/// The Verma module M(λ) with memoized straightening.
pub struct VermaModule<'a> {
    pub lie: LoopAlgebra<'a>,
    pub lambda: AffineWeight,
    memo: RefCell<HashMap<(AffMode, Word), LinComb<Word>>>,
    bases: RefCell<HashMap<Coord, std::rc::Rc<IndexedBasis>>>,
}

impl<'a> VermaModule<'a> {
    pub fn new(data: &'a SuperalgebraData, lambda: AffineWeight) -> Self {
        VermaModule {
            lie: LoopAlgebra::new(data),
            lambda,
            memo: RefCell::new(HashMap::new()),
            bases: RefCell::new(HashMap::new()),
        }
    }

    pub fn data(&self) -> &SuperalgebraData {
        self.lie.data
    }

    /// PBW basis of M(λ)^{λ−β} and its index.
    pub fn basis(&self, beta: &Coord) -> std::rc::Rc<(Vec<Word>, HashMap<Word, usize>)> {
        if let Some(b) = self.bases.borrow().get(beta) {
            return b.clone();
        }
        let words = if coord_nonneg(beta) {
            let modes = self.lie.lowering_modes_below(beta);
            let mut w = self.lie.words_of_weight(beta, &modes);
            w.sort();
            w
        } else {
            Vec::new()
        };
        let index = words.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        let rc = std::rc::Rc::new((words, index));
        self.bases.borrow_mut().insert(*beta, rc.clone());
        rc
    }

    pub fn dim(&self, beta: &Coord) -> usize {
        self.basis(beta).0.len()
    }

    /// h-values of λ + wt(word) on the Cartan basis element `h`.
    fn cartan_value(&self, h: usize, w: &[Mode]) -> Q {
        let mut v = self.lambda.h_part[h].clone();
        for y in w {
            if let Some(r) = self.data().root_of(y.basis as usize) {
                v += &self.data().roots[r][h];
            }
        }
        v
    }

    /// `x · (word v_λ)` straightened into PBW words.
    pub fn apply(&self, x: AffMode, w: &[Mode]) -> LinComb<Word> {
        let key = (x, w.to_vec());
        if let Some(r) = self.memo.borrow().get(&key) {
            return r.clone();
        }
        let r = self.apply_uncached(x, w);
        self.memo.borrow_mut().insert(key, r.clone());
        r
    }

    fn apply_uncached(&self, x: AffMode, w: &[Mode]) -> LinComb<Word> {
        let data = self.lie.data;
        let b = x.basis as usize;
        if x.m == 0 && b < data.h_dim {
            let c = self.cartan_value(b, w);
            return LinComb::single(w.to_vec(), c);
        }
        if self.lie.is_lowering(x) {
            let xm = self.lie.to_mode(x);
            if w.is_empty() || xm < w[0] || (xm == w[0] && !self.lie.odd(x.basis)) {
                let mut v = Vec::with_capacity(w.len() + 1);
                v.push(xm);
                v.extend_from_slice(w);
                return LinComb::single(v, Q::one());
            }
            if xm == w[0] {
                // odd square: x x = ½ [x, x]
                let mut out = LinComb::new();
                for (k, c) in data.bracket(b, b) {
                    let y = AffMode::new(*k, 2 * x.m as i64);
                    out.add_scaled(&self.apply(y, &w[1..]), &(c * half()));
                }
                return out;
            }
        } else if w.is_empty() {
            return LinComb::new();
        }
        let y1 = w[0];
        let rest = &w[1..];
        let ya = self.lie.to_aff(y1);
        let mut out = LinComb::new();
        for (k, c) in data.bracket(b, y1.basis as usize) {
            let z = AffMode::new(*k, x.m as i64 + ya.m as i64);
            out.add_scaled(&self.apply(z, rest), c);
        }
        if x.m as i32 + ya.m as i32 == 0 && x.m != 0 {
            let central = q(x.m as i64) * &data.form[b][y1.basis as usize] * &self.lambda.level;
            out.add_term(rest.to_vec(), central);
        }
        let sign = q(koszul(self.lie.odd(x.basis), self.lie.odd(y1.basis)));
        for (word, c) in self.apply(x, rest).into_iter_terms() {
            out.add_scaled(&self.apply(ya, &word), &(c * &sign));
        }
        out
    }

    /// Applies a product `x_1 x_2 ... x_n` (rightmost first) to a combination.
    pub fn apply_seq(&self, xs: &[AffMode], v: &LinComb<Word>) -> LinComb<Word> {
        let mut cur = v.clone();
        for &x in xs.iter().rev() {
            let mut next = LinComb::new();
            for (w, c) in cur.iter() {
                next.add_scaled(&self.apply(x, w), c);
            }
            cur = next;
        }
        cur
    }

    pub fn memo_len(&self) -> usize {
        self.memo.borrow().len()
    }
}

/// Raising generators of n̂_+: u_{−θ}(1) and the finite simple root vectors.
pub fn raising_generators(data: &SuperalgebraData) -> Vec<AffMode> {
    let mut g = vec![AffMode::new(data.u_minus_theta(), 1)];
    for &s in &data.simple_roots {
        g.push(AffMode::new(data.basis_of_root(s), 0));
    }
    g
}

struct Quotient {
    /// Rows of the projection M(λ)^{λ−β} → L(λ)^{λ−β}.
    proj: Vec<Vec<Q>>,
    reps: Vec<usize>,
}

/// M(λ) or L(λ) presented weight by weight.
pub struct HighestWeightModule<'a> {
    pub verma: VermaModule<'a>,
    pub kind: ModuleKind,
    quotients: RefCell<HashMap<Coord, std::rc::Rc<Quotient>>>,
}

impl<'a> HighestWeightModule<'a> {
    pub fn new(data: &'a SuperalgebraData, lambda: AffineWeight, kind: ModuleKind) -> Self {
        HighestWeightModule {
            verma: VermaModule::new(data, lambda),
            kind,
            quotients: RefCell::new(HashMap::new()),
        }
    }

    pub fn data(&self) -> &SuperalgebraData {
        self.verma.data()
    }

    pub fn lambda(&self) -> &AffineWeight {
        &self.verma.lambda
    }

    fn quotient(&self, beta: &Coord) -> std::rc::Rc<Quotient> {
        if let Some(qt) = self.quotients.borrow().get(beta) {
            return qt.clone();
        }
        let basis = self.verma.basis(beta);
        let n = basis.0.len();
        let qt = if *beta == ZERO_COORD {
            Quotient {
                proj: vec![vec![Q::one()]],
                reps: vec![0],
            }
        } else if n == 0 {
            Quotient {
                proj: vec![],
                reps: vec![],
            }
        } else {
            let mut rows: Vec<Vec<Q>> = Vec::new();
            for g in raising_generators(self.data()) {
                let target = coord_add(beta, &self.verma.lie.neg_coord(g));
                if !coord_nonneg(&target) {
                    continue;
                }
                let sub = self.quotient(&target);
                if sub.reps.is_empty() {
                    continue;
                }
                let tb = self.verma.basis(&target);
                let mut block = vec![vec![Q::zero(); n]; sub.reps.len()];
                for (j, w) in basis.0.iter().enumerate() {
                    for (tw, c) in self.verma.apply(g, w).iter() {
                        let ti = tb.1[tw];
                        for (r, row) in sub.proj.iter().enumerate() {
                            if !row[ti].is_zero() {
                                block[r][j] += &row[ti] * c;
                            }
                        }
                    }
                }
                rows.extend(block);
            }
            let (r, piv) = rref_dense(rows);
            Quotient { proj: r, reps: piv }
        };
        let rc = std::rc::Rc::new(qt);
        self.quotients.borrow_mut().insert(*beta, rc.clone());
        rc
    }

    pub fn dim(&self, beta: &Coord) -> usize {
        match self.kind {
            ModuleKind::Verma => self.verma.dim(beta),
            ModuleKind::Simple => self.quotient(beta).reps.len(),
        }
    }

    /// `u_b(m)` applied to basis vector `i` of weight λ−β, as coordinates at λ−β+wt.
    pub fn act(&self, x: AffMode, beta: &Coord, i: usize) -> Vec<(usize, Q)> {
        let target = coord_add(beta, &self.verma.lie.neg_coord(x));
        if !coord_nonneg(&target) {
            return Vec::new();
        }
        let basis = self.verma.basis(beta);
        let tb = self.verma.basis(&target);
        match self.kind {
            ModuleKind::Verma => {
                let mut out: Vec<(usize, Q)> = self
                    .verma
                    .apply(x, &basis.0[i])
                    .into_iter_terms()
                    .map(|(w, c)| (tb.1[&w], c))
                    .collect();
                out.sort_by_key(|(j, _)| *j);
                out
            }
            ModuleKind::Simple => {
                let src = self.quotient(beta);
                let dst = self.quotient(&target);
                let w = &basis.0[src.reps[i]];
                let mut acc = vec![Q::zero(); dst.reps.len()];
                for (tw, c) in self.verma.apply(x, w).iter() {
                    let ti = tb.1[tw];
                    for (r, row) in dst.proj.iter().enumerate() {
                        if !row[ti].is_zero() {
                            acc[r] += &row[ti] * c;
                        }
                    }
                }
                acc.into_iter().enumerate().filter(|(_, v)| !v.is_zero()).collect()
            }
        }
    }

    /// Basis labels of the weight space (PBW words; representatives for L).
    pub fn basis_words(&self, beta: &Coord) -> Vec<Word> {
        let basis = self.verma.basis(beta);
        match self.kind {
            ModuleKind::Verma => basis.0.clone(),
            ModuleKind::Simple => self.quotient(beta).reps.iter().map(|&i| basis.0[i].clone()).collect(),
        }
    }
}

/// Coefficient of v_λ in σ(word_i)·word_j v_λ, for the even algebras where
/// u_α ↔ u_{−α}, m ↔ −m is an anti-involution.
pub fn gram_matrix(verma: &VermaModule, beta: &Coord) -> SparseRationalMatrix {
    let data = verma.data();
    let basis = verma.basis(beta);
    let words = &basis.0;
    let rows: Vec<Vec<Q>> = words
        .iter()
        .map(|wi| {
            // σ(y_1 ... y_k) = σ(y_k) ... σ(y_1); apply σ(y_1) last.
            let seq: Vec<AffMode> = wi
                .iter()
                .map(|y| AffMode::new(data.transpose(y.basis as usize), y.depth as i64))
                .collect();
            words
                .iter()
                .map(|wj| {
                    verma
                        .apply_seq(&seq, &LinComb::single(wj.clone(), Q::one()))
                        .coeff(&Vec::new())
                })
                .collect()
        })
        .collect();
    SparseRationalMatrix::from_dense(&rows)
}

/// (dim M(λ)^{λ−β}, dim L(λ)^{λ−β}).
pub fn gram_rank(data: &SuperalgebraData, lambda: &AffineWeight, beta: &Coord) -> (usize, usize) {
    let m = HighestWeightModule::new(data, lambda.clone(), ModuleKind::Simple);
    (m.verma.dim(beta), m.dim(beta))
}

/// Weights λ−β in a window: depth `β_0 ≤ N`, finite height `|Σ_i (β_i − β_0 θ_i)| ≤ M`.
pub fn window_coords(data: &SuperalgebraData, window: &TruncationWindow) -> Vec<Coord> {
    let th = &data.root_coords[data.theta];
    let r = data.h_dim;
    let mut out = Vec::new();
    for d in 0..=window.depth as i32 {
        let hi: Vec<i32> = (0..r)
            .map(|i| d * th[i] as i32 + window.height as i32)
            .collect();
        let mut c = ZERO_COORD;
        c[0] = d;
        fn rec(i: usize, r: usize, hi: &[i32], c: &mut Coord, out: &mut Vec<Coord>) {
            if i == r {
                out.push(*c);
                return;
            }
            for v in 0..=hi[i] {
                c[i + 1] = v;
                rec(i + 1, r, hi, c, out);
            }
            c[i + 1] = 0;
        }
        rec(0, r, &hi, &mut c, &mut out);
    }
    out.retain(|c| {
        let fin: i32 = (0..r).map(|i| c[i + 1] - c[0] * th[i] as i32).sum();
        fin.unsigned_abs() <= window.height
    });
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GradedCharacter {
    /// dims keyed by the affine coordinates of λ − μ.
    pub entries: BTreeMap<Coord, i64>,
    pub window: TruncationWindow,
}

pub fn char_module(
    data: &SuperalgebraData,
    lambda: &AffineWeight,
    which: ModuleKind,
    window: &TruncationWindow,
) -> GradedCharacter {
    let m = HighestWeightModule::new(data, lambda.clone(), which);
    let mut entries = BTreeMap::new();
    for c in window_coords(data, window) {
        let d = m.dim(&c);
        if d > 0 {
            entries.insert(c, d as i64);
        }
    }
    GradedCharacter {
        entries,
        window: *window,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Sl2ModuleKind {
    Verma,
    Simple,
    DualVerma,
}

impl std::str::FromStr for Sl2ModuleKind {
    type Err = MiniwError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "verma" => Ok(Sl2ModuleKind::Verma),
            "simple" => Ok(Sl2ModuleKind::Simple),
            "dual_verma" | "dual-verma" => Ok(Sl2ModuleKind::DualVerma),
            other => Err(MiniwError::InvalidConfig {
                field: "which".into(),
                reason: format!("expected verma, simple or dual_verma, got {other:?}"),
            }),
        }
    }
}

fn two_term(dom: usize, cod: usize, cols: Vec<Vec<(usize, Q)>>) -> (usize, usize) {
    let m = SparseRationalMatrix::from_columns(cod, cols);
    let r = m.rank();
    (cod - r, dom - r)
}

fn stabilized<F: Fn(u32) -> (usize, usize)>(what: &str, start: u32, f: F) -> Result<(usize, usize)> {
    let a = f(start);
    let b = f(start + 1);
    let c = f(start + 2);
    if a == b && b == c {
        Ok(a)
    } else {
        Err(MiniwError::NotStabilized(format!(
            "{what}: {a:?}, {b:?}, {c:?} at truncations {start}, {}, {}",
            start + 1,
            start + 2
        )))
    }
}

/// Homology of `f + 1` on an sl2 highest-weight module of highest weight `a`:
/// returns (dim H_0, dim H_1).
pub fn sl2_f_homology(a: &Q, which: Sl2ModuleKind, depth: u32) -> Result<(usize, usize)> {
    let finite = a.is_integer() && *a >= Q::zero();
    let coeff = |j: u32| -> Q {
        match which {
            Sl2ModuleKind::Verma => Q::one(),
            Sl2ModuleKind::Simple => {
                if finite && Q::from_integer((j + 1).into()) > *a {
                    Q::zero()
                } else {
                    Q::one()
                }
            }
            Sl2ModuleKind::DualVerma => q(j as i64 + 1) * (a - q(j as i64)),
        }
    };
    let size = |dd: u32| -> u32 {
        match which {
            Sl2ModuleKind::Simple if finite => {
                let top = crate::rational::to_i64(a).unwrap() as u32;
                dd.min(top)
            }
            _ => dd,
        }
    };
    stabilized("sl2 f-homology", depth, |d| {
        // (f+1): V_{≤d−1} → V_{≤d}
        let cod = size(d) + 1;
        let dom = if d == 0 { 0 } else { size(d - 1) + 1 };
        let cols = (0..dom)
            .map(|j| {
                let mut c = vec![(j as usize, Q::one())];
                let cj = coeff(j);
                if j + 1 < cod && !cj.is_zero() {
                    c.push((j as usize + 1, cj));
                }
                c
            })
            .collect();
        two_term(dom as usize, cod as usize, cols)
    })
}

/// Cohomology of `e(−1) + 1` on the top t-weight space: (dim H^0, dim H^{−1}).
pub fn zero_mode_cohomology(
    data: &SuperalgebraData,
    lambda: &AffineWeight,
    which: ModuleKind,
    chain_length: u32,
) -> Result<(usize, usize)> {
    if chain_length < 2 {
        return Err(MiniwError::InvalidConfig {
            field: "chain".into(),
            reason: "chain length must be at least 2".into(),
        });
    }
    let module = HighestWeightModule::new(data, lambda.clone(), which);
    let e_m1 = AffMode::new(data.u_theta(), -1);
    let chain = |n: u32| -> Coord {
        let mut c = ZERO_COORD;
        c[0] = n as i32;
        c
    };
    let dims: Vec<usize> = (0..=chain_length + 2).map(|n| module.dim(&chain(n))).collect();
    let offsets: Vec<usize> = dims
        .iter()
        .scan(0, |s, &d| {
            let o = *s;
            *s += d;
            Some(o)
        })
        .collect();
    stabilized("zero-mode cohomology", chain_length, |l| {
        let cod: usize = dims[..=l as usize].iter().sum();
        let dom: usize = dims[..l as usize].iter().sum();
        let mut cols = Vec::with_capacity(dom);
        for n in 0..l {
            for i in 0..dims[n as usize] {
                let mut c = vec![(offsets[n as usize] + i, Q::one())];
                for (j, v) in module.act(e_m1, &chain(n), i) {
                    c.push((offsets[n as usize + 1] + j, v));
                }
                cols.push(c);
            }
        }
        two_term(dom, cod, cols)
    })
}

/// ⟨λ, α_0^∨⟩ ∈ Z_{≥0}.
pub fn alpha0_integral(data: &SuperalgebraData, lambda: &AffineWeight) -> bool {
    crate::rational::is_nonneg_integer(&alpha0_pairing(data, lambda))
}
