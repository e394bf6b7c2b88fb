//! Finite-dimensional representations of a fixed acyclic quiver over F_q:
//! iso-class enumeration by GL-orbit, Hom/Ext dimensions via the standard
//! two-term intertwiner complex, Euler forms, automorphism orders, Hall
//! numbers, and extension middle terms.
//!
//! All counting results are memoized inside the [`Category`]; once a class
//! table for a dimension vector is built it never changes.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::ffla::{self, FieldOrder, Matrix};
use crate::{HallError, Result};

/// A finite acyclic quiver with vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Quiver {
    n: usize,
    arrows: Vec<(usize, usize)>,
}

impl Quiver {
    pub fn new(n: usize, arrows: Vec<(usize, usize)>) -> Result<Self> {
        for &(s, t) in &arrows {
            if s >= n || t >= n {
                return Err(HallError::InvalidQuiver(format!(
                    "arrow ({s},{t}) out of range for {n} vertices"
                )));
            }
        }
        let q = Quiver { n, arrows };
        if q.has_cycle() {
            return Err(HallError::CyclicQuiver);
        }
        Ok(q)
    }

    /// The one-vertex quiver with no arrows (type A_1).
    pub fn a1() -> Self {
        Quiver { n: 1, arrows: vec![] }
    }

    /// The quiver 1 -> 2 (vertices 0 -> 1).
    pub fn a2() -> Self {
        Quiver { n: 2, arrows: vec![(0, 1)] }
    }

    fn has_cycle(&self) -> bool {
        // Kahn's algorithm; leftover vertices mean a cycle.
        let mut indeg = vec![0usize; self.n];
        for &(_, t) in &self.arrows {
            indeg[t] += 1;
        }
        let mut stack: Vec<usize> = (0..self.n).filter(|&v| indeg[v] == 0).collect();
        let mut seen = 0;
        while let Some(v) = stack.pop() {
            seen += 1;
            for &(s, t) in &self.arrows {
                if s == v {
                    indeg[t] -= 1;
                    if indeg[t] == 0 {
                        stack.push(t);
                    }
                }
            }
        }
        seen < self.n
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn arrows(&self) -> &[(usize, usize)] {
        &self.arrows
    }

    /// All directed paths from `i` to `j`, as sequences of arrow indices in
    /// traversal order; the empty path appears iff `i == j`. Deterministic.
    pub fn paths(&self, i: usize, j: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        self.paths_from(i, j, &mut cur, &mut out);
        out
    }

    fn paths_from(&self, at: usize, target: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if at == target {
            out.push(cur.clone());
        }
        for (idx, &(s, t)) in self.arrows.iter().enumerate() {
            if s == at {
                cur.push(idx);
                self.paths_from(t, target, cur, out);
                cur.pop();
            }
        }
    }
}

/// Componentwise-nonnegative dimension vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DimVector(pub Vec<usize>);

impl DimVector {
    pub fn zero(n: usize) -> Self {
        DimVector(vec![0; n])
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn add(&self, other: &DimVector) -> DimVector {
        DimVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Componentwise difference, or None if any entry would go negative.
    pub fn checked_sub(&self, other: &DimVector) -> Option<DimVector> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(DimVector)
    }

    pub fn le(&self, other: &DimVector) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&d| d == 0)
    }

    pub fn to_kclass(&self) -> KClass {
        KClass(self.0.iter().map(|&d| d as i64).collect())
    }

    /// All dimension vectors in the box [0, bound], lexicographic.
    pub fn box_up_to(bound: &DimVector) -> Vec<DimVector> {
        let mut out = vec![DimVector::zero(bound.0.len())];
        for (i, &b) in bound.0.iter().enumerate() {
            let prev = std::mem::take(&mut out);
            for d in prev {
                for v in 0..=b {
                    let mut d2 = d.clone();
                    d2.0[i] = v;
                    out.push(d2);
                }
            }
        }
        out.sort();
        out
    }
}

impl fmt::Display for DimVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|d| d.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A Grothendieck-group element: one integer per vertex, possibly negative.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KClass(pub Vec<i64>);

impl KClass {
    pub fn zero(n: usize) -> Self {
        KClass(vec![0; n])
    }

    pub fn add(&self, other: &KClass) -> KClass {
        KClass(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &KClass) -> KClass {
        KClass(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }
}

impl fmt::Display for KClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|d| d.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// A concrete representation: a vector space dimension per vertex and one
/// matrix per arrow, of shape `dim(target) x dim(source)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rep {
    pub dims: DimVector,
    pub mats: Vec<Matrix>,
}

impl Rep {
    pub fn zero(quiver: &Quiver) -> Self {
        Rep::with_dims(quiver, DimVector::zero(quiver.vertex_count()))
    }

    /// The representation with the given dimensions and all-zero arrow maps.
    pub fn with_dims(quiver: &Quiver, dims: DimVector) -> Self {
        let mats = quiver
            .arrows()
            .iter()
            .map(|&(s, t)| Matrix::zero(dims.0[t], dims.0[s]))
            .collect();
        Rep { dims, mats }
    }

    pub fn direct_sum(&self, other: &Rep, quiver: &Quiver) -> Rep {
        let dims = self.dims.add(&other.dims);
        let mats = quiver
            .arrows()
            .iter()
            .enumerate()
            .map(|(a, &(s, t))| {
                let mut m = Matrix::zero(dims.0[t], dims.0[s]);
                for r in 0..self.dims.0[t] {
                    for c in 0..self.dims.0[s] {
                        m.set(r, c, self.mats[a].get(r, c));
                    }
                }
                for r in 0..other.dims.0[t] {
                    for c in 0..other.dims.0[s] {
                        m.set(self.dims.0[t] + r, self.dims.0[s] + c, other.mats[a].get(r, c));
                    }
                }
                m
            })
            .collect();
        Rep { dims, mats }
    }
}

/// Canonical identifier of an isomorphism class: the dimension vector plus
/// the index of its canonical representative in that vector's class list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IsoClassId {
    pub dim: DimVector,
    pub index: usize,
}

impl IsoClassId {
    pub fn is_zero(&self) -> bool {
        self.dim.is_zero()
    }
}

impl fmt::Display for IsoClassId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "d{}#{}", self.dim, self.index)
    }
}

struct ClassTable {
    reps: Vec<Rep>,
    // canonical index of every arrow-matrix tuple of this dimension vector
    lookup: HashMap<Vec<Matrix>, usize>,
}

#[derive(Default)]
struct Caches {
    tables: HashMap<DimVector, ClassTable>,
    homext: HashMap<(IsoClassId, IsoClassId), (usize, usize)>,
    aut: HashMap<IsoClassId, u128>,
    hall: HashMap<(IsoClassId, IsoClassId, IsoClassId), u128>,
    ext_fibers: HashMap<(IsoClassId, IsoClassId), BTreeMap<IsoClassId, u128>>,
}

/// The fixed category of finite-dimensional quiver representations over F_q,
/// together with its memo layer and the enumeration budget.
pub struct Category {
    quiver: Quiver,
    q: FieldOrder,
    budget: u128,
    caches: RefCell<Caches>,
}

pub const DEFAULT_BUDGET: u128 = 1 << 24;

impl Category {
    pub fn new(quiver: Quiver, q: u64, budget: u128) -> Result<Self> {
        Ok(Category {
            quiver,
            q: FieldOrder::new(q)?,
            budget,
            caches: RefCell::new(Caches::default()),
        })
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn q(&self) -> FieldOrder {
        self.q
    }

    pub fn qv(&self) -> u64 {
        self.q.get()
    }

    pub fn budget(&self) -> u128 {
        self.budget
    }

    pub fn zero_class(&self) -> IsoClassId {
        IsoClassId { dim: DimVector::zero(self.quiver.vertex_count()), index: 0 }
    }

    pub fn simple(&self, vertex: usize) -> Result<IsoClassId> {
        let mut d = DimVector::zero(self.quiver.vertex_count());
        d.0[vertex] = 1;
        let rep = Rep::with_dims(&self.quiver, d);
        self.canonical_id(&rep)
    }

    // ----- class tables -----------------------------------------------------

    fn ensure_table(&self, d: &DimVector) -> Result<()> {
        if self.caches.borrow().tables.contains_key(d) {
            return Ok(());
        }
        let table = self.build_table(d)?;
        self.caches.borrow_mut().tables.insert(d.clone(), table);
        Ok(())
    }

    fn build_table(&self, d: &DimVector) -> Result<ClassTable> {
        let entries: usize = self
            .quiver
            .arrows()
            .iter()
            .map(|&(s, t)| d.0[s] * d.0[t])
            .sum();
        let tuple_count = ffla::checked_power(self.q.get(), entries, self.budget)?;
        // vertices not touching any arrow never move a matrix entry, so their
        // GL factor acts trivially and is skipped in the orbit sweep
        let mut active = vec![false; self.quiver.vertex_count()];
        for &(s, t) in self.quiver.arrows() {
            active[s] = true;
            active[t] = true;
        }
        let group_size: u128 = d
            .0
            .iter()
            .enumerate()
            .map(|(i, &n)| if active[i] { ffla::gl_order(n, self.q) } else { 1 })
            .product();
        if group_size > self.budget {
            return Err(HallError::BudgetExceeded { needed: group_size, budget: self.budget });
        }

        // invertible (g, g^-1) pairs per vertex
        let gls: Vec<Vec<(Matrix, Matrix)>> = d
            .0
            .iter()
            .enumerate()
            .map(|(i, &n)| {
                if !active[i] {
                    return Ok(vec![(Matrix::identity(n), Matrix::identity(n))]);
                }
                let ms = ffla::enumerate_matrices(n, n, self.q, self.budget)?;
                Ok(ms
                    .into_iter()
                    .filter_map(|g| ffla::inverse(&g, self.q).map(|gi| (g, gi)))
                    .collect())
            })
            .collect::<Result<_>>()?;

        let all = self.enumerate_mat_tuples(d)?;
        debug_assert_eq!(all.len() as u128, tuple_count);
        let mut lookup: HashMap<Vec<Matrix>, usize> = HashMap::new();
        let mut reps = Vec::new();
        for tuple in all {
            if lookup.contains_key(&tuple) {
                continue;
            }
            let index = reps.len();
            // sweep the GL-orbit; first-seen tuple is the lex-minimal one
            self.for_each_group_element(&gls, &mut |gs| {
                let moved: Vec<Matrix> = self
                    .quiver
                    .arrows()
                    .iter()
                    .enumerate()
                    .map(|(a, &(s, t))| gs[t].0.mul(&tuple[a], self.q).mul(&gs[s].1, self.q))
                    .collect();
                lookup.entry(moved).or_insert(index);
            });
            reps.push(Rep { dims: d.clone(), mats: tuple });
        }
        Ok(ClassTable { reps, lookup })
    }

    fn enumerate_mat_tuples(&self, d: &DimVector) -> Result<Vec<Vec<Matrix>>> {
        let mut tuples: Vec<Vec<Matrix>> = vec![Vec::new()];
        for &(s, t) in self.quiver.arrows() {
            let choices = ffla::enumerate_matrices(d.0[t], d.0[s], self.q, self.budget)?;
            let mut next = Vec::with_capacity(tuples.len() * choices.len());
            if (tuples.len() as u128) * (choices.len() as u128) > self.budget {
                return Err(HallError::BudgetExceeded {
                    needed: (tuples.len() as u128) * (choices.len() as u128),
                    budget: self.budget,
                });
            }
            for t0 in &tuples {
                for c in &choices {
                    let mut t1 = t0.clone();
                    t1.push(c.clone());
                    next.push(t1);
                }
            }
            tuples = next;
        }
        Ok(tuples)
    }

    fn for_each_group_element(
        &self,
        gls: &[Vec<(Matrix, Matrix)>],
        f: &mut impl FnMut(&[&(Matrix, Matrix)]),
    ) {
        fn rec<'a>(
            gls: &'a [Vec<(Matrix, Matrix)>],
            chosen: &mut Vec<&'a (Matrix, Matrix)>,
            f: &mut impl FnMut(&[&(Matrix, Matrix)]),
        ) {
            if chosen.len() == gls.len() {
                f(chosen);
                return;
            }
            for g in &gls[chosen.len()] {
                chosen.push(g);
                rec(gls, chosen, f);
                chosen.pop();
            }
        }
        rec(gls, &mut Vec::new(), f);
    }

    /// Identify the isomorphism class of a concrete representation.
    pub fn canonical_id(&self, rep: &Rep) -> Result<IsoClassId> {
        self.ensure_table(&rep.dims)?;
        let caches = self.caches.borrow();
        let table = &caches.tables[&rep.dims];
        let index = *table
            .lookup
            .get(&rep.mats)
            .expect("every matrix tuple of this dimension vector is classified");
        Ok(IsoClassId { dim: rep.dims.clone(), index })
    }

    /// The complete, duplicate-free, deterministic class list for `d`.
    pub fn enumerate_classes(&self, d: &DimVector) -> Result<Vec<IsoClassId>> {
        self.ensure_table(d)?;
        let caches = self.caches.borrow();
        let n = caches.tables[d].reps.len();
        Ok((0..n).map(|index| IsoClassId { dim: d.clone(), index }).collect())
    }

    /// All classes with dimension vector componentwise at most `bound`.
    pub fn classes_up_to(&self, bound: &DimVector) -> Result<Vec<IsoClassId>> {
        let mut out = Vec::new();
        for d in DimVector::box_up_to(bound) {
            out.extend(self.enumerate_classes(&d)?);
        }
        Ok(out)
    }

    /// All classes whose total dimension is at most `total`, within the box.
    pub fn classes_up_to_total(&self, bound: &DimVector, total: usize) -> Result<Vec<IsoClassId>> {
        Ok(self
            .classes_up_to(bound)?
            .into_iter()
            .filter(|c| c.dim.total() <= total)
            .collect())
    }

    pub fn class_rep(&self, id: &IsoClassId) -> Result<Rep> {
        self.ensure_table(&id.dim)?;
        let caches = self.caches.borrow();
        Ok(caches.tables[&id.dim].reps[id.index].clone())
    }

    pub fn parse_class_label(&self, dim: DimVector, index: usize) -> Result<IsoClassId> {
        let classes = self.enumerate_classes(&dim)?;
        classes
            .into_iter()
            .nth(index)
            .ok_or_else(|| HallError::Config(format!("no class d{dim}#{index}")))
    }

    // ----- Hom, Ext, Euler form ---------------------------------------------

    /// The intertwiner matrix of the two-term complex
    /// `(+) Hom(M_i, N_i) -> (+)_{a: i->j} Hom(M_i, N_j)`.
    fn intertwiner_matrix(&self, m: &Rep, n: &Rep) -> Matrix {
        let dom: usize = (0..self.quiver.vertex_count())
            .map(|i| m.dims.0[i] * n.dims.0[i])
            .sum();
        let cod: usize = self
            .quiver
            .arrows()
            .iter()
            .map(|&(s, t)| m.dims.0[s] * n.dims.0[t])
            .sum();
        let mut phi = Matrix::zero(cod, dom);

        // offsets into the vectorized domain/codomain
        let mut dom_off = vec![0usize; self.quiver.vertex_count()];
        let mut acc = 0;
        for i in 0..self.quiver.vertex_count() {
            dom_off[i] = acc;
            acc += m.dims.0[i] * n.dims.0[i];
        }
        let mut cod_off = vec![0usize; self.quiver.arrows().len()];
        let mut acc = 0;
        for (a, &(s, t)) in self.quiver.arrows().iter().enumerate() {
            cod_off[a] = acc;
            acc += m.dims.0[s] * n.dims.0[t];
        }

        // f_i entry (r, c) (row-major) is domain coordinate dom_off[i] + r*dM_i + c... here
        // f_i: M_i -> N_i is an (nN_i x nM_i) matrix; vectorize row-major.
        for (a, &(s, t)) in self.quiver.arrows().iter().enumerate() {
            let (dms, dmt) = (m.dims.0[s], m.dims.0[t]);
            let (dns, dnt) = (n.dims.0[s], n.dims.0[t]);
            let _ = dns;
            // + f_t * M_a: basis entry E_{rc} of f_t contributes M_a[c, c'] at (r, c')
            for r in 0..dnt {
                for c in 0..dmt {
                    let col = dom_off[t] + r * dmt + c;
                    for cp in 0..dms {
                        let row = cod_off[a] + r * dms + cp;
                        let v = self.q.add(phi.get(row, col), m.mats[a].get(c, cp));
                        phi.set(row, col, v);
                    }
                }
            }
            // - N_a * f_s: basis entry E_{rc} of f_s contributes -N_a[r', r] at (r', c)
            for r in 0..n.dims.0[s] {
                for c in 0..dms {
                    let col = dom_off[s] + r * dms + c;
                    for rp in 0..dnt {
                        let row = cod_off[a] + rp * dms + c;
                        let v = self.q.sub(phi.get(row, col), n.mats[a].get(rp, r));
                        phi.set(row, col, v);
                    }
                }
            }
        }
        phi
    }

    pub fn hom_ext(&self, m: &IsoClassId, n: &IsoClassId) -> Result<(usize, usize)> {
        if let Some(&he) = self.caches.borrow().homext.get(&(m.clone(), n.clone())) {
            return Ok(he);
        }
        let mr = self.class_rep(m)?;
        let nr = self.class_rep(n)?;
        let phi = self.intertwiner_matrix(&mr, &nr);
        let rank = ffla::rank(&phi, self.q);
        let he = (phi.cols() - rank, phi.rows() - rank);
        self.caches.borrow_mut().homext.insert((m.clone(), n.clone()), he);
        Ok(he)
    }

    pub fn hom_dim(&self, m: &IsoClassId, n: &IsoClassId) -> Result<usize> {
        Ok(self.hom_ext(m, n)?.0)
    }

    pub fn ext1_dim(&self, m: &IsoClassId, n: &IsoClassId) -> Result<usize> {
        Ok(self.hom_ext(m, n)?.1)
    }

    pub fn euler_form(&self, alpha: &KClass, beta: &KClass) -> i64 {
        let mut acc: i64 = alpha.0.iter().zip(&beta.0).map(|(a, b)| a * b).sum();
        for &(s, t) in self.quiver.arrows() {
            acc -= alpha.0[s] * beta.0[t];
        }
        acc
    }

    pub fn symmetric_form(&self, alpha: &KClass, beta: &KClass) -> i64 {
        self.euler_form(alpha, beta) + self.euler_form(beta, alpha)
    }

    pub fn euler_classes(&self, m: &IsoClassId, n: &IsoClassId) -> i64 {
        self.euler_form(&m.dim.to_kclass(), &n.dim.to_kclass())
    }

    // ----- automorphisms ----------------------------------------------------

    /// A basis of Hom(M, N) as tuples of per-vertex matrices.
    pub fn hom_basis(&self, m: &IsoClassId, n: &IsoClassId) -> Result<Vec<Vec<Matrix>>> {
        let mr = self.class_rep(m)?;
        let nr = self.class_rep(n)?;
        Ok(self.hom_basis_reps(&mr, &nr))
    }

    /// Same, for concrete representations that need not be canonical.
    pub fn hom_basis_reps(&self, m: &Rep, n: &Rep) -> Vec<Vec<Matrix>> {
        let phi = self.intertwiner_matrix(m, n);
        let kern = ffla::kernel_basis(&phi, self.q);
        let mut out = Vec::with_capacity(kern.cols());
        for k in 0..kern.cols() {
            let coords: Vec<u64> = (0..kern.rows()).map(|r| kern.get(r, k)).collect();
            out.push(self.devectorize_hom(m, n, &coords));
        }
        out
    }

    fn devectorize_hom(&self, m: &Rep, n: &Rep, coords: &[u64]) -> Vec<Matrix> {
        let mut out = Vec::with_capacity(self.quiver.vertex_count());
        let mut off = 0;
        for i in 0..self.quiver.vertex_count() {
            let (dm, dn) = (m.dims.0[i], n.dims.0[i]);
            let mut f = Matrix::zero(dn, dm);
            for r in 0..dn {
                for c in 0..dm {
                    f.set(r, c, coords[off + r * dm + c]);
                }
            }
            off += dn * dm;
            out.push(f);
        }
        out
    }

    /// |Aut(M)|: invertible intertwiners counted by exhausting Hom(M, M).
    /// Over an arrowless quiver an intertwiner is just a tuple of linear
    /// maps, so |Aut| is a product of general linear group orders; that
    /// closed form covers dimensions whose Hom-space is too large to sweep.
    pub fn aut_order(&self, m: &IsoClassId) -> Result<u128> {
        if let Some(&a) = self.caches.borrow().aut.get(m) {
            return Ok(a);
        }
        if self.quiver.arrows().is_empty() {
            let aut = m.dim.0.iter().map(|&d| ffla::gl_order(d, self.q)).product();
            self.caches.borrow_mut().aut.insert(m.clone(), aut);
            return Ok(aut);
        }
        let basis = self.hom_basis(m, m)?;
        let count = ffla::checked_power(self.q.get(), basis.len(), self.budget)?;
        let mut aut = 0u128;
        self.for_each_combination(basis.len(), |coeffs| {
            let f = self.combine_hom(&basis, coeffs, &m.dim, &m.dim);
            if f.iter().all(|fi| ffla::is_invertible(fi, self.q)) {
                aut += 1;
            }
        });
        debug_assert!(aut <= count);
        self.caches.borrow_mut().aut.insert(m.clone(), aut);
        Ok(aut)
    }

    fn combine_hom(
        &self,
        basis: &[Vec<Matrix>],
        coeffs: &[u64],
        mdim: &DimVector,
        ndim: &DimVector,
    ) -> Vec<Matrix> {
        let mut f: Vec<Matrix> = (0..self.quiver.vertex_count())
            .map(|i| Matrix::zero(ndim.0[i], mdim.0[i]))
            .collect();
        for (b, &c) in basis.iter().zip(coeffs) {
            if c == 0 {
                continue;
            }
            for (i, bi) in b.iter().enumerate() {
                let mut scaled = Matrix::zero(bi.rows(), bi.cols());
                for r in 0..bi.rows() {
                    for cc in 0..bi.cols() {
                        scaled.set(r, cc, self.q.mul(c, bi.get(r, cc)));
                    }
                }
                f[i] = f[i].add(&scaled, self.q);
            }
        }
        f
    }

    fn for_each_combination(&self, n: usize, mut f: impl FnMut(&[u64])) {
        let mut coeffs = vec![0u64; n];
        loop {
            f(&coeffs);
            let mut i = n;
            loop {
                if i == 0 {
                    return;
                }
                i -= 1;
                coeffs[i] += 1;
                if coeffs[i] < self.q.get() {
                    break;
                }
                coeffs[i] = 0;
            }
        }
    }

    // ----- Hall numbers -----------------------------------------------------

    /// g^L_{M,N}: subobjects X of L with X isomorphic to N and L/X to M.
    pub fn hall_number(&self, l: &IsoClassId, m: &IsoClassId, n: &IsoClassId) -> Result<u128> {
        if l.dim != m.dim.add(&n.dim) {
            return Ok(0);
        }
        let key = (l.clone(), m.clone(), n.clone());
        if let Some(&g) = self.caches.borrow().hall.get(&key) {
            return Ok(g);
        }
        let lr = self.class_rep(l)?;
        let mut count = 0u128;
        self.for_each_subrep(&lr, &n.dim, &mut |sub, quot| {
            let ok = self.canonical_id(sub)? == *n && self.canonical_id(quot)? == *m;
            if ok {
                count += 1;
            }
            Ok(())
        })?;
        self.caches.borrow_mut().hall.insert(key, count);
        Ok(count)
    }

    /// Enumerate subrepresentations of `l` of dimension vector `sub_dim`,
    /// calling `f(sub, quotient)` for each.
    fn for_each_subrep(
        &self,
        l: &Rep,
        sub_dim: &DimVector,
        f: &mut impl FnMut(&Rep, &Rep) -> Result<()>,
    ) -> Result<()> {
        if !sub_dim.le(&l.dims) {
            return Ok(());
        }
        // per-vertex candidate subspaces, as RREF row-bases
        let choices: Vec<Vec<Matrix>> = (0..self.quiver.vertex_count())
            .map(|i| ffla::enumerate_subspaces(sub_dim.0[i], l.dims.0[i], self.q))
            .collect();
        let total: u128 = choices.iter().map(|c| c.len() as u128).product();
        if total > self.budget {
            return Err(HallError::BudgetExceeded { needed: total, budget: self.budget });
        }
        let mut pick = Vec::new();
        self.subrep_rec(l, sub_dim, &choices, &mut pick, f)
    }

    fn subrep_rec<'a>(
        &self,
        l: &Rep,
        sub_dim: &DimVector,
        choices: &'a [Vec<Matrix>],
        pick: &mut Vec<&'a Matrix>,
        f: &mut impl FnMut(&Rep, &Rep) -> Result<()>,
    ) -> Result<()> {
        if pick.len() == choices.len() {
            if let Some((sub, quot)) = self.try_subquotient(l, sub_dim, pick) {
                f(&sub, &quot)?;
            }
            return Ok(());
        }
        for c in &choices[pick.len()] {
            pick.push(c);
            self.subrep_rec(l, sub_dim, choices, pick, f)?;
            pick.pop();
        }
        Ok(())
    }

    /// If the chosen subspaces are arrow-stable, return the induced sub- and
    /// quotient representations.
    fn try_subquotient(&self, l: &Rep, sub_dim: &DimVector, pick: &[&Matrix]) -> Option<(Rep, Rep)> {
        let nq = self.q;
        // complement bases (columns) extending each subspace to the full space
        let mut sub_cols = Vec::new(); // per-vertex: d x k matrix of basis columns
        let mut full_basis = Vec::new(); // per-vertex: d x d invertible [sub | complement]
        for (i, rows) in pick.iter().enumerate() {
            let d = l.dims.0[i];
            let k = sub_dim.0[i];
            let mut cols = Matrix::zero(d, k);
            for r in 0..k {
                for c in 0..d {
                    cols.set(c, r, rows.get(r, c));
                }
            }
            // extend to a basis: pivot columns of [cols | I]
            let aug = cols.hstack(&Matrix::identity(d));
            let pivots = ffla::pivot_columns(&aug, nq);
            let mut basis = Matrix::zero(d, d);
            for (j, &p) in pivots.iter().enumerate() {
                for r in 0..d {
                    basis.set(r, j, aug.get(r, p));
                }
            }
            debug_assert!(ffla::is_invertible(&basis, nq));
            sub_cols.push(cols);
            full_basis.push(basis);
        }
        let inv_basis: Vec<Matrix> = full_basis
            .iter()
            .map(|b| ffla::inverse(b, nq).expect("full basis is invertible"))
            .collect();

        let mut sub_mats = Vec::new();
        let mut quot_mats = Vec::new();
        for (a, &(s, t)) in self.quiver.arrows().iter().enumerate() {
            let ks = sub_dim.0[s];
            let kt = sub_dim.0[t];
            let dt = l.dims.0[t];
            // image of the sub-basis under L_a, in coordinates of the full basis at t
            let img = inv_basis[t].mul(&l.mats[a].mul(&sub_cols[s], nq), nq);
            // stability: complement coordinates must vanish
            for r in kt..dt {
                for c in 0..ks {
                    if img.get(r, c) != 0 {
                        return None;
                    }
                }
            }
            let mut sm = Matrix::zero(kt, ks);
            for r in 0..kt {
                for c in 0..ks {
                    sm.set(r, c, img.get(r, c));
                }
            }
            sub_mats.push(sm);
            // quotient map: complement coordinates of images of complement vectors
            let mut comp = Matrix::zero(l.dims.0[s], l.dims.0[s] - ks);
            for r in 0..l.dims.0[s] {
                for c in 0..l.dims.0[s] - ks {
                    comp.set(r, c, full_basis[s].get(r, ks + c));
                }
            }
            let qimg = inv_basis[t].mul(&l.mats[a].mul(&comp, nq), nq);
            let mut qm = Matrix::zero(dt - kt, l.dims.0[s] - ks);
            for r in 0..dt - kt {
                for c in 0..l.dims.0[s] - ks {
                    qm.set(r, c, qimg.get(kt + r, c));
                }
            }
            quot_mats.push(qm);
        }
        let sub = Rep { dims: sub_dim.clone(), mats: sub_mats };
        let quot_dim = l.dims.checked_sub(sub_dim).expect("sub_dim <= dims");
        let quot = Rep { dims: quot_dim, mats: quot_mats };
        Some((sub, quot))
    }

    // ----- extensions -------------------------------------------------------

    /// Representatives of the ext-cocycle classes of Ext^1(M, N): a basis of a
    /// complement of the intertwiner image inside (+)_{a: s->t} Hom(M_s, N_t),
    /// each returned as one matrix per arrow.
    pub fn ext_cocycle_basis(&self, m: &IsoClassId, n: &IsoClassId) -> Result<Vec<Vec<Matrix>>> {
        let mr = self.class_rep(m)?;
        let nr = self.class_rep(n)?;
        let phi = self.intertwiner_matrix(&mr, &nr);
        // standard basis vectors extending the column space to the whole codomain
        let aug = phi.hstack(&Matrix::identity(phi.rows()));
        let pivots = ffla::pivot_columns(&aug, self.q);
        let mut out = Vec::new();
        for p in pivots.into_iter().filter(|&p| p >= phi.cols()) {
            let w = p - phi.cols();
            out.push(self.devectorize_cocycle(&mr, &nr, w));
        }
        Ok(out)
    }

    fn devectorize_cocycle(&self, m: &Rep, n: &Rep, coord: usize) -> Vec<Matrix> {
        let mut out = Vec::new();
        let mut off = 0;
        for &(s, t) in self.quiver.arrows() {
            let (dms, dnt) = (m.dims.0[s], n.dims.0[t]);
            let mut e = Matrix::zero(dnt, dms);
            if coord >= off && coord < off + dms * dnt {
                let local = coord - off;
                e.set(local / dms, local % dms, 1);
            }
            off += dms * dnt;
            out.push(e);
        }
        out
    }

    /// Middle term of the extension of M by N with the given cocycle: the
    /// representation with spaces N_i (+) M_i and maps [[N_a, e_a], [0, M_a]].
    pub fn ext_middle(&self, m: &IsoClassId, n: &IsoClassId, cocycle: &[Matrix]) -> Result<IsoClassId> {
        let mr = self.class_rep(m)?;
        let nr = self.class_rep(n)?;
        let dims = nr.dims.add(&mr.dims);
        let mats: Vec<Matrix> = self
            .quiver
            .arrows()
            .iter()
            .enumerate()
            .map(|(a, &(s, t))| {
                let mut e = Matrix::zero(dims.0[t], dims.0[s]);
                for r in 0..nr.dims.0[t] {
                    for c in 0..nr.dims.0[s] {
                        e.set(r, c, nr.mats[a].get(r, c));
                    }
                    for c in 0..mr.dims.0[s] {
                        e.set(r, nr.dims.0[s] + c, cocycle[a].get(r, c));
                    }
                }
                for r in 0..mr.dims.0[t] {
                    for c in 0..mr.dims.0[s] {
                        e.set(nr.dims.0[t] + r, nr.dims.0[s] + c, mr.mats[a].get(r, c));
                    }
                }
                e
            })
            .collect();
        self.canonical_id(&Rep { dims, mats })
    }

    /// The middle-term distribution of Ext^1(M, N): how many of the
    /// q^{ext1_dim} classes have each middle term. Values sum to q^{ext1}.
    pub fn ext_fibers(&self, m: &IsoClassId, n: &IsoClassId) -> Result<BTreeMap<IsoClassId, u128>> {
        let key = (m.clone(), n.clone());
        if let Some(f) = self.caches.borrow().ext_fibers.get(&key) {
            return Ok(f.clone());
        }
        let basis = self.ext_cocycle_basis(m, n)?;
        ffla::checked_power(self.q.get(), basis.len(), self.budget)?;
        let mut fibers: BTreeMap<IsoClassId, u128> = BTreeMap::new();
        let mut err = None;
        self.for_each_combination(basis.len(), |coeffs| {
            if err.is_some() {
                return;
            }
            let cocycle = self.combine_cocycle(&basis, coeffs, m, n);
            match self.ext_middle(m, n, &cocycle) {
                Ok(l) => *fibers.entry(l).or_insert(0) += 1,
                Err(e) => err = Some(e),
            }
        });
        if let Some(e) = err {
            return Err(e);
        }
        self.caches.borrow_mut().ext_fibers.insert(key, fibers.clone());
        Ok(fibers)
    }

    fn combine_cocycle(
        &self,
        basis: &[Vec<Matrix>],
        coeffs: &[u64],
        m: &IsoClassId,
        n: &IsoClassId,
    ) -> Vec<Matrix> {
        let mut e: Vec<Matrix> = self
            .quiver
            .arrows()
            .iter()
            .map(|&(s, t)| Matrix::zero(n.dim.0[t], m.dim.0[s]))
            .collect();
        for (b, &c) in basis.iter().zip(coeffs) {
            if c == 0 {
                continue;
            }
            for (a, ba) in b.iter().enumerate() {
                for r in 0..ba.rows() {
                    for cc in 0..ba.cols() {
                        let v = self.q.add(e[a].get(r, cc), self.q.mul(c, ba.get(r, cc)));
                        e[a].set(r, cc, v);
                    }
                }
            }
        }
        e
    }

    /// |Ext^1(M, N)_L| as a plain count.
    pub fn ext_class_count(&self, m: &IsoClassId, n: &IsoClassId, l: &IsoClassId) -> Result<u128> {
        Ok(self.ext_fibers(m, n)?.get(l).copied().unwrap_or(0))
    }

    // ----- projectives ------------------------------------------------------

    /// The indecomposable projective P_i: basis of the space at vertex j is
    /// the set of paths i -> j; arrows act by path composition.
    pub fn projective(&self, i: usize) -> Rep {
        let n = self.quiver.vertex_count();
        let bases: Vec<Vec<Vec<usize>>> = (0..n).map(|j| self.quiver.paths(i, j)).collect();
        let dims = DimVector(bases.iter().map(|b| b.len()).collect());
        let mats = self
            .quiver
            .arrows()
            .iter()
            .enumerate()
            .map(|(a, &(s, t))| {
                let mut m = Matrix::zero(dims.0[t], dims.0[s]);
                for (c, p) in bases[s].iter().enumerate() {
                    let mut ext = p.clone();
                    ext.push(a);
                    let r = bases[t]
                        .iter()
                        .position(|pp| *pp == ext)
                        .expect("extended path is a path");
                    m.set(r, c, 1);
                }
                m
            })
            .collect();
        Rep { dims, mats }
    }
}
