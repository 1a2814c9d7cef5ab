//! Finite-dimensional data of the supported Lie superalgebras.
//!
//! Everything is derived from an exact matrix realization: structure
//! constants from supercommutators, the form from the supertrace, roots from
//! the adjoint action of the Cartan subalgebra.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};
use serde::Deserialize;

use crate::error::{MiniwError, Result};
use crate::linalg::{rref_dense, SparseRationalMatrix, SparseVec};
use crate::rational::{half, koszul, parse_q, q, Q};

pub const SUPPORTED: [&str; 4] = ["sl2", "sl3", "spo21", "sl21"];

const SL2_JSON: &str = include_str!("../data/sl2.json");
const SL3_JSON: &str = include_str!("../data/sl3.json");
const SPO21_JSON: &str = include_str!("../data/spo21.json");
const SL21_JSON: &str = include_str!("../data/sl21.json");

#[derive(Debug, Deserialize)]
pub struct AlgebraFile {
    pub format: String,
    pub version: u32,
    pub name: String,
    #[serde(default)]
    pub description: String,
    pub size: usize,
    pub index_parity: Vec<u8>,
    pub cartan: Vec<Vec<(usize, usize, String)>>,
    pub root_vectors: Vec<Vec<(usize, usize, String)>>,
    pub e: usize,
    pub f: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BasisKind {
    Cartan(usize),
    Root(usize),
}

/// Exact data of one supported algebra.
///
/// Basis layout: indices `0..h_dim` are the Cartan basis `[x, h^f...]`,
/// followed by one root vector per root.
#[derive(Clone, Debug)]
pub struct SuperalgebraData {
    pub name: String,
    pub dim: usize,
    pub h_dim: usize,
    pub kinds: Vec<BasisKind>,
    pub parity: Vec<bool>,
    bracket: Vec<Vec<SparseVec>>,
    pub form: Vec<Vec<Q>>,
    /// Root values on the Cartan basis, indexed by root.
    pub roots: Vec<Vec<Q>>,
    pub root_basis: Vec<usize>,
    pub root_parity: Vec<bool>,
    pub positive: Vec<bool>,
    pub neg_root: Vec<usize>,
    pub simple_roots: Vec<usize>,
    /// Integer coordinates of each root in the simple roots.
    pub root_coords: Vec<Vec<i64>>,
    pub theta: usize,
    pub e: usize,
    pub x: usize,
    pub f: SparseVec,
    /// ad x eigenvalue of each basis element.
    pub grading: Vec<Q>,
    pub cartan_gram: Vec<Vec<Q>>,
    pub cartan_gram_inv: Vec<Vec<Q>>,
    matrices: Vec<Vec<Vec<Q>>>,
    index_parity: Vec<bool>,
}

type Mat = Vec<Vec<Q>>;

fn mat_zero(n: usize) -> Mat {
    vec![vec![Q::zero(); n]; n]
}

fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let mut out = mat_zero(n);
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                if !b[k][j].is_zero() {
                    out[i][j] += &a[i][k] * &b[k][j];
                }
            }
        }
    }
    out
}

fn mat_lin(a: &Mat, sa: &Q, b: &Mat, sb: &Q) -> Mat {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x * sa + y * sb).collect())
        .collect()
}

fn supertrace(a: &Mat, par: &[bool]) -> Q {
    (0..a.len()).fold(Q::zero(), |acc, i| {
        if par[i] {
            acc - &a[i][i]
        } else {
            acc + &a[i][i]
        }
    })
}

fn mat_parity(a: &Mat, par: &[bool]) -> Option<bool> {
    let mut seen = None;
    for (i, row) in a.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            let p = par[i] != par[j];
            match seen {
                None => seen = Some(p),
                Some(s) if s != p => return None,
                _ => {}
            }
        }
    }
    Some(seen.unwrap_or(false))
}

fn supercommutator(a: &Mat, pa: bool, b: &Mat, pb: bool) -> Mat {
    let s = q(-koszul(pa, pb));
    mat_lin(&mat_mul(a, b), &Q::one(), &mat_mul(b, a), &s)
}

fn invert(m: &[Vec<Q>]) -> Option<Mat> {
    let n = m.len();
    let aug: Mat = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            r
        })
        .collect();
    let (r, piv) = rref_dense(aug);
    if piv.len() < n || piv.iter().enumerate().any(|(i, &p)| p != i) {
        return None;
    }
    Some(r.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Solves `Σ c_i B_i = target` over the flattened matrices `B_i`.
fn express(basis: &[Mat], target: &Mat) -> Option<Vec<Q>> {
    let n = target.len();
    let w = target.first().map_or(0, |r| r.len());
    let k = basis.len();
    let rows: Mat = (0..n * w)
        .map(|e| {
            let (i, j) = (e / w, e % w);
            let mut r: Vec<Q> = basis.iter().map(|b| b[i][j].clone()).collect();
            r.push(target[i][j].clone());
            r
        })
        .collect();
    let (r, piv) = rref_dense(rows);
    if piv.contains(&k) {
        return None;
    }
    let mut c = vec![Q::zero(); k];
    for (row, &p) in r.iter().zip(&piv) {
        c[p] = row[k].clone();
    }
    Some(c)
}

fn parse_sparse(entries: &[(usize, usize, String)], size: usize) -> Result<Mat> {
    let mut m = mat_zero(size);
    for (i, j, v) in entries {
        if *i >= size || *j >= size {
            return Err(MiniwError::BadData(format!("entry ({i},{j}) outside {size}x{size}")));
        }
        m[*i][*j] += parse_q(v)?;
    }
    Ok(m)
}

fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).fold(Q::zero(), |acc, (x, y)| acc + x * y)
}

fn lex_positive(v: &[Q]) -> bool {
    v.iter().find(|c| !c.is_zero()).is_some_and(|c| c.is_positive())
}

pub fn algebra_source(name: &str) -> Result<&'static str> {
    match name {
        "sl2" => Ok(SL2_JSON),
        "sl3" => Ok(SL3_JSON),
        "spo21" => Ok(SPO21_JSON),
        "sl21" => Ok(SL21_JSON),
        "sl22" | "psl22" | "A11" => Err(MiniwError::UnsupportedAlgebra(format!(
            "{name}: A(1,1) = psl(2|2) has a degenerate setup that requires a separate modification and is excluded"
        ))),
        other => Err(MiniwError::UnsupportedAlgebra(format!(
            "{other} (supported: {})",
            SUPPORTED.join(", ")
        ))),
    }
}

pub fn build_algebra(name: &str) -> Result<SuperalgebraData> {
    let src = algebra_source(name)?;
    let file: AlgebraFile =
        serde_json::from_str(src).map_err(|e| MiniwError::BadData(format!("{name}: {e}")))?;
    SuperalgebraData::from_file(&file)
}

impl SuperalgebraData {
    pub fn from_file(file: &AlgebraFile) -> Result<Self> {
        if file.format != "miniw-algebra" || file.version != 1 {
            return Err(MiniwError::BadData(format!(
                "unknown format {} v{}",
                file.format, file.version
            )));
        }
        let n = file.size;
        if file.index_parity.len() != n {
            return Err(MiniwError::BadData("index_parity length differs from size".into()));
        }
        let ipar: Vec<bool> = file.index_parity.iter().map(|&p| p == 1).collect();
        let cartan_raw = file
            .cartan
            .iter()
            .map(|c| parse_sparse(c, n))
            .collect::<Result<Vec<_>>>()?;
        let roots_raw = file
            .root_vectors
            .iter()
            .map(|c| parse_sparse(c, n))
            .collect::<Result<Vec<_>>>()?;
        let h_dim = cartan_raw.len();
        let nroots = roots_raw.len();
        if file.e >= nroots || file.f >= nroots {
            return Err(MiniwError::BadData("e/f index out of range".into()));
        }
        let str_form = |a: &Mat, b: &Mat| supertrace(&mat_mul(a, b), &ipar);

        let e_raw = &roots_raw[file.e];
        let f_raw = &roots_raw[file.f];
        let h_raw = supercommutator(e_raw, false, f_raw, false);
        let he = supercommutator(&h_raw, false, e_raw, false);
        let c = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .find(|&(i, j)| !e_raw[i][j].is_zero())
            .map(|(i, j)| &he[i][j] / &e_raw[i][j])
            .ok_or_else(|| MiniwError::BadData("e is zero".into()))?;
        if c.is_zero() {
            return Err(MiniwError::BadData("[[e,f],e] = 0".into()));
        }
        let x_mat = mat_lin(&h_raw, &c.recip(), &h_raw, &Q::zero());
        express(&cartan_raw, &x_mat)
            .ok_or_else(|| MiniwError::BadData("x is not in the Cartan span".into()))?;

        // h^f: kernel of (.|x) on the Cartan span.
        let xs: Vec<Q> = cartan_raw.iter().map(|h| str_form(h, &x_mat)).collect();
        let func = SparseRationalMatrix::from_dense(&[xs]);
        let mut cartan: Vec<Mat> = vec![x_mat.clone()];
        for v in func.kernel() {
            let mut m = mat_zero(n);
            for (coef, h) in v.iter().zip(&cartan_raw) {
                m = mat_lin(&m, &Q::one(), h, coef);
            }
            cartan.push(m);
        }
        if cartan.len() != h_dim {
            return Err(MiniwError::BadData("x is isotropic or Cartan is degenerate".into()));
        }

        // Roots on the Cartan basis.
        let mut root_vals = Vec::with_capacity(nroots);
        let mut rpar = Vec::with_capacity(nroots);
        for u in &roots_raw {
            let p = mat_parity(u, &ipar)
                .ok_or_else(|| MiniwError::BadData("root vector is not homogeneous".into()))?;
            let mut vals = Vec::with_capacity(h_dim);
            for h in &cartan {
                let hu = supercommutator(h, false, u, p);
                let ev = express(std::slice::from_ref(u), &hu)
                    .ok_or_else(|| MiniwError::BadData("root vector is not an ad h eigenvector".into()))?;
                vals.push(ev[0].clone());
            }
            root_vals.push(vals);
            rpar.push(p);
        }
        let neg_of = |r: usize| -> Result<usize> {
            let target: Vec<Q> = root_vals[r].iter().map(|v| -v).collect();
            root_vals
                .iter()
                .position(|v| *v == target)
                .ok_or_else(|| MiniwError::BadData(format!("root {r} has no negative")))
        };

        // Order roots by x-value descending, then lexicographically descending.
        let mut order: Vec<usize> = (0..nroots).collect();
        order.sort_by(|&a, &b| root_vals[b].cmp(&root_vals[a]));
        let pos_in_order = |r: usize| order.iter().position(|&o| o == r).unwrap();

        let mut scaled: Vec<Mat> = roots_raw.clone();
        let positive_raw: Vec<bool> = root_vals.iter().map(|v| lex_positive(v)).collect();
        for r in 0..nroots {
            if !positive_raw[r] {
                continue;
            }
            let m = neg_of(r)?;
            let pair = str_form(&roots_raw[r], &roots_raw[m]);
            if pair.is_zero() {
                return Err(MiniwError::BadData(format!("(u_a|u_-a) = 0 for root {r}")));
            }
            scaled[m] = mat_lin(&roots_raw[m], &pair.recip(), &roots_raw[m], &Q::zero());
        }

        let mut matrices: Vec<Mat> = cartan.clone();
        let mut kinds: Vec<BasisKind> = (0..h_dim).map(BasisKind::Cartan).collect();
        let mut parity = vec![false; h_dim];
        let mut roots = Vec::new();
        let mut root_parity = Vec::new();
        let mut root_basis = Vec::new();
        for (new_r, &old) in order.iter().enumerate() {
            matrices.push(scaled[old].clone());
            kinds.push(BasisKind::Root(new_r));
            parity.push(rpar[old]);
            roots.push(root_vals[old].clone());
            root_parity.push(rpar[old]);
            root_basis.push(h_dim + new_r);
        }
        let dim = matrices.len();
        let positive: Vec<bool> = roots.iter().map(|v| lex_positive(v)).collect();
        let neg_root: Vec<usize> = (0..nroots)
            .map(|r| {
                let t: Vec<Q> = roots[r].iter().map(|v| -v).collect();
                roots.iter().position(|v| *v == t).unwrap()
            })
            .collect();
        let e = h_dim + pos_in_order(file.e);
        let f_idx = h_dim + pos_in_order(file.f);

        // Structure constants.
        let mut bracket = vec![vec![Vec::new(); dim]; dim];
        for i in 0..dim {
            for j in 0..dim {
                let c = supercommutator(&matrices[i], parity[i], &matrices[j], parity[j]);
                let coeffs = express(&matrices, &c).ok_or_else(|| {
                    MiniwError::BadData(format!("bracket [{i},{j}] leaves the span"))
                })?;
                bracket[i][j] = coeffs
                    .into_iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .collect();
            }
        }

        // Form, rescaled so (theta|theta) = 2.
        let mut form: Vec<Vec<Q>> = (0..dim)
            .map(|i| (0..dim).map(|j| str_form(&matrices[i], &matrices[j])).collect())
            .collect();
        let theta = positive
            .iter()
            .enumerate()
            .filter(|(_, &p)| p)
            .max_by(|a, b| roots[a.0].cmp(&roots[b.0]))
            .map(|(r, _)| r)
            .ok_or_else(|| MiniwError::BadData("no positive roots".into()))?;
        let gram: Mat = (0..h_dim).map(|i| form[i][..h_dim].to_vec()).collect();
        let gram_inv = invert(&gram).ok_or_else(|| MiniwError::BadData("Cartan form degenerate".into()))?;
        let tt = quad(&gram_inv, &roots[theta], &roots[theta]);
        let scale = &tt / q(2);
        for row in form.iter_mut() {
            for v in row.iter_mut() {
                *v *= &scale;
            }
        }
        let cartan_gram: Mat = (0..h_dim).map(|i| form[i][..h_dim].to_vec()).collect();
        let cartan_gram_inv = invert(&cartan_gram).unwrap();

        let grading: Vec<Q> = (0..dim)
            .map(|b| match kinds[b] {
                BasisKind::Cartan(_) => Q::zero(),
                BasisKind::Root(r) => roots[r][0].clone(),
            })
            .collect();

        // f = [e,f_raw]-normalized lowest root vector.
        let ef = &bracket[e][f_idx];
        let xcoef = ef
            .iter()
            .find(|(b, _)| *b == 0)
            .map(|(_, v)| v.clone())
            .ok_or_else(|| MiniwError::BadData("[e, u_-theta] has no x component".into()))?;
        let f: SparseVec = vec![(f_idx, xcoef.recip())];

        // Simple roots and integer coordinates.
        let pos_roots: Vec<usize> = (0..nroots).filter(|&r| positive[r]).collect();
        let mut sums = BTreeSet::new();
        for &a in &pos_roots {
            for &b in &pos_roots {
                let s: Vec<Q> = roots[a].iter().zip(&roots[b]).map(|(u, v)| u + v).collect();
                sums.insert(s);
            }
        }
        let simple_roots: Vec<usize> = pos_roots
            .iter()
            .copied()
            .filter(|&r| !sums.contains(&roots[r]))
            .collect();
        if simple_roots.len() != h_dim {
            return Err(MiniwError::BadData(format!(
                "{} simple roots for rank {h_dim}",
                simple_roots.len()
            )));
        }
        let simple_mats: Vec<Mat> = simple_roots
            .iter()
            .map(|&s| roots[s].iter().map(|v| vec![v.clone()]).collect())
            .collect();
        let mut root_coords = Vec::with_capacity(nroots);
        for r in 0..nroots {
            let target: Mat = roots[r].iter().map(|v| vec![v.clone()]).collect();
            let c = express(&simple_mats, &target)
                .ok_or_else(|| MiniwError::BadData("simple roots do not span".into()))?;
            let ints = c
                .iter()
                .map(|v| {
                    if v.is_integer() {
                        crate::rational::to_i64(v).ok_or_else(|| MiniwError::BadData("huge coordinate".into()))
                    } else {
                        Err(MiniwError::BadData("non-integral root coordinate".into()))
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            root_coords.push(ints);
        }

        let data = SuperalgebraData {
            name: file.name.clone(),
            dim,
            h_dim,
            kinds,
            parity,
            bracket,
            form,
            roots,
            root_basis,
            root_parity,
            positive,
            neg_root,
            simple_roots,
            root_coords,
            theta,
            e,
            x: 0,
            f,
            grading,
            cartan_gram,
            cartan_gram_inv,
            matrices,
            index_parity: ipar,
        };
        data.check_closure()?;
        Ok(data)
    }

    fn check_closure(&self) -> Result<()> {
        for i in 0..self.dim {
            for j in 0..self.dim {
                let c = supercommutator(&self.matrices[i], self.parity[i], &self.matrices[j], self.parity[j]);
                let mut rebuilt = mat_zero(c.len());
                for (k, v) in &self.bracket[i][j] {
                    rebuilt = mat_lin(&rebuilt, &Q::one(), &self.matrices[*k], v);
                }
                if rebuilt != c {
                    return Err(MiniwError::BadData(format!("closure fails at [{i},{j}]")));
                }
            }
        }
        Ok(())
    }

    pub fn bracket(&self, i: usize, j: usize) -> &SparseVec {
        &self.bracket[i][j]
    }

    /// Bracket of two sparse elements.
    pub fn bracket_vec(&self, a: &SparseVec, b: &SparseVec) -> SparseVec {
        let mut acc = vec![Q::zero(); self.dim];
        for (i, x) in a {
            for (j, y) in b {
                for (k, c) in &self.bracket[*i][*j] {
                    acc[*k] += x * y * c;
                }
            }
        }
        to_sparse(acc)
    }

    pub fn form_vec(&self, a: &SparseVec, b: &SparseVec) -> Q {
        let mut s = Q::zero();
        for (i, x) in a {
            for (j, y) in b {
                if !self.form[*i][*j].is_zero() {
                    s += x * y * &self.form[*i][*j];
                }
            }
        }
        s
    }

    pub fn matrix(&self, b: usize) -> &[Vec<Q>] {
        &self.matrices[b]
    }

    pub fn realization_parity(&self) -> &[bool] {
        &self.index_parity
    }

    pub fn root_of(&self, b: usize) -> Option<usize> {
        match self.kinds[b] {
            BasisKind::Root(r) => Some(r),
            BasisKind::Cartan(_) => None,
        }
    }

    /// Weight of a basis element on the Cartan basis (zero for Cartan elements).
    pub fn weight_of(&self, b: usize) -> Vec<Q> {
        match self.kinds[b] {
            BasisKind::Root(r) => self.roots[r].clone(),
            BasisKind::Cartan(_) => vec![Q::zero(); self.h_dim],
        }
    }

    /// Simple-root coordinates of a basis element's weight.
    pub fn coords_of(&self, b: usize) -> Vec<i64> {
        match self.kinds[b] {
            BasisKind::Root(r) => self.root_coords[r].clone(),
            BasisKind::Cartan(_) => vec![0; self.h_dim],
        }
    }

    pub fn height_of(&self, b: usize) -> i64 {
        self.coords_of(b).iter().sum()
    }

    pub fn basis_of_root(&self, r: usize) -> usize {
        self.root_basis[r]
    }

    pub fn u_theta(&self) -> usize {
        self.root_basis[self.theta]
    }

    pub fn u_minus_theta(&self) -> usize {
        self.root_basis[self.neg_root[self.theta]]
    }

    pub fn is_odd(&self, b: usize) -> bool {
        self.parity[b]
    }

    /// (a|b) on h* through the inverse Cartan gram.
    pub fn pair_weights(&self, a: &[Q], b: &[Q]) -> Q {
        quad(&self.cartan_gram_inv, a, b)
    }

    pub fn superdimension(&self) -> i64 {
        self.parity.iter().map(|&p| if p { -1 } else { 1 }).sum()
    }

    pub fn even_dim(&self) -> usize {
        self.parity.iter().filter(|&&p| !p).count()
    }

    pub fn odd_dim(&self) -> usize {
        self.parity.iter().filter(|&&p| p).count()
    }

    /// Basis indices with ad x eigenvalue `j`.
    pub fn graded_piece(&self, j: &Q) -> Vec<usize> {
        (0..self.dim).filter(|&b| self.grading[b] == *j).collect()
    }

    /// Basis indices of g_{>0} (positive grade).
    pub fn positive_part(&self) -> Vec<usize> {
        (0..self.dim).filter(|&b| self.grading[b].is_positive()).collect()
    }

    /// The character χ̄(u) = (f|u).
    pub fn chi(&self, b: usize) -> Q {
        self.form_vec(&self.f, &vec![(b, Q::one())])
    }

    /// ad(a) as a dense matrix acting on coefficient columns.
    pub fn ad_matrix(&self, a: &SparseVec) -> Mat {
        let mut m = mat_zero(self.dim);
        for j in 0..self.dim {
            let col = self.bracket_vec(a, &vec![(j, Q::one())]);
            for (i, v) in col {
                m[i][j] = v;
            }
        }
        m
    }

    /// Dual basis coefficients `C` with `(b^i | b_j) = δ_ij`, `b^i = Σ_k C[i][k] b_k`.
    pub fn dual_basis(&self) -> Mat {
        invert(&self.form).expect("non-degenerate form")
    }

    /// ad of the Casimir element Σ_i (-1)^{p_i} b^i b_i on the adjoint representation.
    pub fn casimir_adjoint(&self) -> Mat {
        let c = self.dual_basis();
        let mut out = mat_zero(self.dim);
        for i in 0..self.dim {
            let bi = vec![(i, Q::one())];
            let dual: SparseVec = to_sparse(c[i].clone());
            let prod = mat_mul(&self.ad_matrix(&dual), &self.ad_matrix(&bi));
            let sign = q(if self.parity[i] { -1 } else { 1 });
            out = mat_lin(&out, &Q::one(), &prod, &sign);
        }
        out
    }

    /// Half the Casimir eigenvalue on the adjoint representation, read off on `e`.
    pub fn dual_coxeter(&self) -> Q {
        let m = self.casimir_adjoint();
        &m[self.e][self.e] / q(2)
    }

    // ---- invariant checks ----

    pub fn check_jacobi(&self) -> std::result::Result<(), String> {
        for a in 0..self.dim {
            for b in 0..self.dim {
                for c in 0..self.dim {
                    let (pa, pb, pc) = (self.parity[a], self.parity[b], self.parity[c]);
                    let t1 = self.bracket_vec(&vec![(a, Q::one())], &self.bracket[b][c]);
                    let t2 = self.bracket_vec(&vec![(b, Q::one())], &self.bracket[c][a]);
                    let t3 = self.bracket_vec(&vec![(c, Q::one())], &self.bracket[a][b]);
                    let mut acc = vec![Q::zero(); self.dim];
                    for (t, s) in [(t1, koszul(pa, pc)), (t2, koszul(pb, pa)), (t3, koszul(pc, pb))] {
                        for (k, v) in t {
                            acc[k] += v * q(s);
                        }
                    }
                    if acc.iter().any(|v| !v.is_zero()) {
                        return Err(format!("super Jacobi fails on ({a},{b},{c})"));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn check_antisymmetry(&self) -> std::result::Result<(), String> {
        for a in 0..self.dim {
            for b in 0..self.dim {
                let s = q(-koszul(self.parity[a], self.parity[b]));
                let lhs = to_dense(&self.bracket[a][b], self.dim);
                let rhs: Vec<Q> = to_dense(&self.bracket[b][a], self.dim).iter().map(|v| v * &s).collect();
                if lhs != rhs {
                    return Err(format!("super antisymmetry fails on ({a},{b})"));
                }
            }
        }
        Ok(())
    }

    pub fn check_form(&self) -> std::result::Result<(), String> {
        for a in 0..self.dim {
            for b in 0..self.dim {
                let v = &self.form[a][b];
                if !v.is_zero() && self.parity[a] != self.parity[b] {
                    return Err(format!("form is not even on ({a},{b})"));
                }
                let s = q(koszul(self.parity[a], self.parity[b]));
                if *v != &self.form[b][a] * s {
                    return Err(format!("form is not supersymmetric on ({a},{b})"));
                }
                for c in 0..self.dim {
                    let lhs = self.form_vec(&self.bracket[a][b], &vec![(c, Q::one())]);
                    let rhs = self.form_vec(&vec![(a, Q::one())], &self.bracket[b][c]);
                    if lhs != rhs {
                        return Err(format!("form not invariant on ({a},{b},{c})"));
                    }
                }
            }
        }
        if SparseRationalMatrix::from_dense(&self.form).rank() != self.dim {
            return Err("form is degenerate".into());
        }
        Ok(())
    }

    pub fn theta_norm(&self) -> Q {
        self.pair_weights(&self.roots[self.theta], &self.roots[self.theta])
    }

    pub fn check_triple(&self) -> std::result::Result<(), String> {
        let e = vec![(self.e, Q::one())];
        let x = vec![(self.x, Q::one())];
        if self.bracket_vec(&e, &self.f) != x {
            return Err("[e,f] != x".into());
        }
        if self.bracket_vec(&x, &e) != e {
            return Err("[x,e] != e".into());
        }
        let mf: SparseVec = self.f.iter().map(|(i, v)| (*i, -v)).collect();
        if self.bracket_vec(&x, &self.f) != mf {
            return Err("[x,f] != -f".into());
        }
        Ok(())
    }

    pub fn check_minimal_gradation(&self) -> std::result::Result<(), String> {
        let allowed = [q(-1), -half(), Q::zero(), half(), q(1)];
        for (b, j) in self.grading.iter().enumerate() {
            if !allowed.contains(j) {
                return Err(format!("basis element {b} has grade {j}"));
            }
            // ad x acts diagonally with eigenvalue j.
            let xb = self.bracket(self.x, b);
            let expect: SparseVec = if j.is_zero() { vec![] } else { vec![(b, j.clone())] };
            if *xb != expect {
                return Err(format!("ad x is not diagonal on basis element {b}"));
            }
        }
        if self.graded_piece(&q(1)) != vec![self.e] {
            return Err("g_1 is not spanned by e".into());
        }
        if self.graded_piece(&q(-1)).len() != 1 {
            return Err("g_-1 is not one-dimensional".into());
        }
        Ok(())
    }

    pub fn check_root_pairing(&self) -> std::result::Result<(), String> {
        for r in 0..self.roots.len() {
            if self.positive[r] {
                let a = self.root_basis[r];
                let b = self.root_basis[self.neg_root[r]];
                if self.form[a][b] != Q::one() {
                    return Err(format!("(u_a|u_-a) = {} for root {r}", self.form[a][b]));
                }
            }
        }
        Ok(())
    }

    /// The anti-involution u_a <-> u_-a fixing the Cartan subalgebra.
    pub fn transpose(&self, b: usize) -> usize {
        match self.kinds[b] {
            BasisKind::Cartan(_) => b,
            BasisKind::Root(r) => self.root_basis[self.neg_root[r]],
        }
    }

    pub fn check_transpose(&self) -> std::result::Result<(), String> {
        for a in 0..self.dim {
            for b in 0..self.dim {
                if self.form[self.transpose(a)][self.transpose(b)] != self.form[b][a] {
                    return Err(format!("(u^t|v^t) != (v|u) on ({a},{b})"));
                }
            }
        }
        if self.transpose(self.x) != self.x {
            return Err("x^t != x".into());
        }
        Ok(())
    }

    /// Runs every structural check.
    pub fn check_all(&self) -> std::result::Result<(), String> {
        self.check_antisymmetry()?;
        self.check_jacobi()?;
        self.check_form()?;
        if self.theta_norm() != q(2) {
            return Err(format!("(theta|theta) = {}", self.theta_norm()));
        }
        self.check_triple()?;
        self.check_minimal_gradation()?;
        self.check_root_pairing()?;
        self.check_transpose()?;
        Ok(())
    }

    /// Basis of g^f = ker ad f, as sparse vectors.
    pub fn centralizer_f(&self) -> Vec<SparseVec> {
        let adf = SparseRationalMatrix::from_dense(&self.ad_matrix(&self.f));
        adf.kernel().into_iter().map(to_sparse).collect()
    }

    pub fn in_centralizer(&self, b: usize) -> bool {
        self.bracket_vec(&self.f, &vec![(b, Q::one())]).is_empty()
    }

    /// Basis indices of h^f.
    pub fn hf_basis(&self) -> Vec<usize> {
        (1..self.h_dim).collect()
    }

    /// `m·δ_{m,n}·((k+h^∨)(u|v) − ½ str_{g_0}(ad u ad v))` for u, v ∈ g_0, else 0.
    pub fn natural_cocycle(&self, k: &Q, u: usize, m: i64, v: usize, n: i64) -> Result<Q> {
        for b in [u, v] {
            if !self.in_centralizer(b) {
                return Err(MiniwError::NotInCentralizer(format!("basis element {b}")));
            }
        }
        if !self.grading[u].is_zero() || !self.grading[v].is_zero() || m != n {
            return Ok(Q::zero());
        }
        let g0 = self.graded_piece(&Q::zero());
        let mut st = Q::zero();
        for &b in &g0 {
            let vb = self.bracket(v, b).clone();
            let uvb = self.bracket_vec(&vec![(u, Q::one())], &vb);
            let c = uvb.iter().find(|(i, _)| *i == b).map(|(_, c)| c.clone()).unwrap_or_default();
            if self.parity[b] {
                st -= c;
            } else {
                st += c;
            }
        }
        let hv = self.dual_coxeter();
        Ok(q(m) * ((k + hv) * &self.form[u][v] - st / q(2)))
    }
}

/// Neutral pairing ⟨u|v⟩_ne = χ̄([u,v]) on g_{½}.
#[derive(Clone, Debug, PartialEq)]
pub struct NeutralPairing {
    pub basis_half: Vec<usize>,
    pub gram: Vec<Vec<Q>>,
    pub dual_basis: Vec<Vec<Q>>,
    pub odd: bool,
}

impl NeutralPairing {
    pub fn len(&self) -> usize {
        self.basis_half.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis_half.is_empty()
    }
}

pub fn neutral_pairing(data: &SuperalgebraData) -> Result<NeutralPairing> {
    let basis_half = data.graded_piece(&half());
    let gram: Mat = basis_half
        .iter()
        .map(|&a| {
            basis_half
                .iter()
                .map(|&b| {
                    let ab = data.bracket(a, b);
                    data.form_vec(&data.f, ab)
                })
                .collect()
        })
        .collect();
    let odd = basis_half.first().is_some_and(|&b| data.parity[b]);
    if basis_half.is_empty() {
        return Ok(NeutralPairing {
            basis_half,
            gram,
            dual_basis: vec![],
            odd,
        });
    }
    let inv = invert(&gram).ok_or_else(|| MiniwError::SingularGram(data.name.clone()))?;
    let dual_basis: Mat = (0..inv.len())
        .map(|i| (0..inv.len()).map(|j| inv[j][i].clone()).collect())
        .collect();
    Ok(NeutralPairing {
        basis_half,
        gram,
        dual_basis,
        odd,
    })
}

pub fn quad(m: &[Vec<Q>], a: &[Q], b: &[Q]) -> Q {
    let mut s = Q::zero();
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        s += ai * dot(&m[i], b);
    }
    s
}

pub fn to_sparse(v: Vec<Q>) -> SparseVec {
    v.into_iter().enumerate().filter(|(_, x)| !x.is_zero()).collect()
}

pub fn to_dense(v: &SparseVec, n: usize) -> Vec<Q> {
    let mut out = vec![Q::zero(); n];
    for (i, x) in v {
        out[*i] += x;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qr;

    fn all() -> Vec<SuperalgebraData> {
        SUPPORTED.iter().map(|n| build_algebra(n).unwrap()).collect()
    }

    #[test]
    fn structural_checks_pass() {
        for a in all() {
            a.check_all().unwrap_or_else(|e| panic!("{}: {e}", a.name));
        }
    }

    #[test]
    fn dimensions() {
        let dims: Vec<(usize, usize, usize)> = all().iter().map(|a| (a.dim, a.even_dim(), a.odd_dim())).collect();
        assert_eq!(dims, vec![(3, 3, 0), (8, 8, 0), (5, 3, 2), (8, 4, 4)]);
        let sd: Vec<i64> = all().iter().map(|a| a.superdimension()).collect();
        assert_eq!(sd, vec![3, 8, 1, 0]);
    }

    #[test]
    fn casimir_is_scalar_on_adjoint() {
        for a in all() {
            let m = a.casimir_adjoint();
            let c = m[a.e][a.e].clone();
            for i in 0..a.dim {
                for j in 0..a.dim {
                    let expect = if i == j { c.clone() } else { Q::zero() };
                    assert_eq!(m[i][j], expect, "{} ({i},{j})", a.name);
                }
            }
        }
    }

    #[test]
    fn dual_coxeter_numbers() {
        let h: Vec<Q> = all().iter().map(|a| a.dual_coxeter()).collect();
        assert_eq!(h, vec![q(2), q(3), qr(3, 2), q(1)]);
    }

    #[test]
    fn half_grade_pieces() {
        let a = all();
        let halves: Vec<(usize, usize)> = a
            .iter()
            .map(|d| {
                let h = d.graded_piece(&half());
                (h.len(), h.iter().filter(|&&b| d.parity[b]).count())
            })
            .collect();
        assert_eq!(halves, vec![(0, 0), (2, 0), (1, 1), (2, 2)]);
    }

    #[test]
    fn neutral_pairings() {
        let sl2 = build_algebra("sl2").unwrap();
        assert!(neutral_pairing(&sl2).unwrap().is_empty());
        let spo = build_algebra("spo21").unwrap();
        let p = neutral_pairing(&spo).unwrap();
        assert_eq!(p.len(), 1);
        assert!(!p.gram[0][0].is_zero());
        let sl3 = build_algebra("sl3").unwrap();
        let p = neutral_pairing(&sl3).unwrap();
        assert!(p.gram[0][0].is_zero() && p.gram[1][1].is_zero());
        assert_eq!(p.gram[0][1], -p.gram[1][0].clone());
        assert!(!p.gram[0][1].is_zero());
        for a in all() {
            let p = neutral_pairing(&a).unwrap();
            for i in 0..p.len() {
                for j in 0..p.len() {
                    // <u_i|u^j> = δ_ij
                    let s = (0..p.len()).fold(Q::zero(), |acc, g| acc + &p.gram[i][g] * &p.dual_basis[j][g]);
                    assert_eq!(s, if i == j { Q::one() } else { Q::zero() });
                    let sign = if p.odd { Q::one() } else { -Q::one() };
                    assert_eq!(p.gram[i][j], &p.gram[j][i] * sign);
                }
            }
        }
    }

    #[test]
    fn centralizer_dimension() {
        for a in all() {
            let gf = a.centralizer_f().len();
            let expect = 1 + a.graded_piece(&half()).len() + (a.h_dim - 1);
            assert_eq!(gf, expect, "{}", a.name);
            for h in a.hf_basis() {
                assert!(a.in_centralizer(h));
            }
        }
    }

    #[test]
    fn rejects_psl22() {
        let err = build_algebra("sl22").unwrap_err();
        assert_eq!(err.kind(), "unsupported-algebra");
        assert!(build_algebra("g2").is_err());
    }

    #[test]
    fn cocycle_examples() {
        let sl3 = build_algebra("sl3").unwrap();
        let k = qr(1, 3);
        let h = sl3.hf_basis()[0];
        assert_eq!(sl3.natural_cocycle(&k, h, 0, h, 0).unwrap(), Q::zero());
        let half_b = sl3.graded_piece(&-half())[0];
        assert_eq!(sl3.natural_cocycle(&k, half_b, 1, h, 1).unwrap(), Q::zero());
        let sl2 = build_algebra("sl2").unwrap();
        let fb = sl2.f[0].0;
        assert_eq!(sl2.natural_cocycle(&k, fb, 2, fb, 2).unwrap(), Q::zero());
        assert!(sl2.natural_cocycle(&k, sl2.e, 1, fb, 1).is_err());
    }
}
