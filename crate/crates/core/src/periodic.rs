//! The m-periodic extended derived Hall algebra and its odd-periodic,
//! K-free variant: basis elements are stalk sums over Z_m decorated with
//! degree-indexed Grothendieck classes, products are the cyclic H-number
//! sums, and straightening rewrites everything over the ordered-product
//! basis.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::derived::{classes_of_kclass, derived_H};
use crate::hall::ExtHallElt;
use crate::repcat::{Category, DimVector, IsoClassId, KClass};
use crate::scalar::Scalar;
use crate::{HallError, Result};

/// u_{(+)_i M_i[i]} prod_i K_{k_i, i}: one class and one K-class per degree
/// in Z_m.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PeriodicBasisElt {
    pub classes: Vec<IsoClassId>,
    pub ks: Vec<KClass>,
}

impl PeriodicBasisElt {
    pub fn m(&self) -> usize {
        self.classes.len()
    }

    pub fn stalk_total_dim(&self) -> usize {
        self.classes.iter().map(|c| c.dim.total()).sum()
    }
}

impl fmt::Display for PeriodicBasisElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, c) in self.classes.iter().enumerate() {
            if !c.is_zero() {
                parts.push(format!("{c}@{i}"));
            }
        }
        for (i, k) in self.ks.iter().enumerate() {
            if !k.is_zero() {
                parts.push(format!("K{k}@{i}"));
            }
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join(" * "))
        }
    }
}

/// Linear combination of periodic basis elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicElt {
    q: u64,
    m: usize,
    terms: BTreeMap<PeriodicBasisElt, Scalar>,
}

impl PeriodicElt {
    pub fn zero(q: u64, m: usize) -> Self {
        PeriodicElt { q, m, terms: BTreeMap::new() }
    }

    pub fn basis(q: u64, b: PeriodicBasisElt) -> Self {
        let m = b.m();
        let mut e = PeriodicElt::zero(q, m);
        e.add_term(b, Scalar::one(q));
        e
    }

    pub fn add_term(&mut self, b: PeriodicBasisElt, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(b).or_insert_with(|| Scalar::zero(self.q));
        *entry += c;
        self.terms.retain(|_, v| !v.is_zero());
    }

    pub fn scale(&self, c: &Scalar) -> PeriodicElt {
        let mut out = PeriodicElt::zero(self.q, self.m);
        for (b, v) in &self.terms {
            out.add_term(b.clone(), v * c);
        }
        out
    }

    pub fn add(&self, other: &PeriodicElt) -> PeriodicElt {
        let mut out = self.clone();
        for (b, v) in &other.terms {
            out.add_term(b.clone(), v.clone());
        }
        out
    }

    pub fn sub(&self, other: &PeriodicElt) -> PeriodicElt {
        self.add(&other.scale(&Scalar::from_int(self.q, -1)))
    }

    pub fn terms(&self) -> &BTreeMap<PeriodicBasisElt, Scalar> {
        &self.terms
    }

    pub fn coeff(&self, b: &PeriodicBasisElt) -> Scalar {
        self.terms.get(b).cloned().unwrap_or_else(|| Scalar::zero(self.q))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl fmt::Display for PeriodicElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(b, c)| format!("({c}) {b}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Element of the K-free odd-periodic algebra: combination of stalk tuples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OddPeriodicElt {
    q: u64,
    m: usize,
    terms: BTreeMap<Vec<IsoClassId>, Scalar>,
}

impl OddPeriodicElt {
    pub fn zero(q: u64, m: usize) -> Self {
        OddPeriodicElt { q, m, terms: BTreeMap::new() }
    }

    pub fn basis(q: u64, classes: Vec<IsoClassId>) -> Self {
        let m = classes.len();
        let mut e = OddPeriodicElt::zero(q, m);
        e.add_term(classes, Scalar::one(q));
        e
    }

    pub fn add_term(&mut self, classes: Vec<IsoClassId>, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(classes).or_insert_with(|| Scalar::zero(self.q));
        *entry += c;
        self.terms.retain(|_, v| !v.is_zero());
    }

    pub fn scale(&self, c: &Scalar) -> OddPeriodicElt {
        let mut out = OddPeriodicElt::zero(self.q, self.m);
        for (b, v) in &self.terms {
            out.add_term(b.clone(), v * c);
        }
        out
    }

    pub fn add(&self, other: &OddPeriodicElt) -> OddPeriodicElt {
        let mut out = self.clone();
        for (b, v) in &other.terms {
            out.add_term(b.clone(), v.clone());
        }
        out
    }

    pub fn terms(&self) -> &BTreeMap<Vec<IsoClassId>, Scalar> {
        &self.terms
    }

    pub fn coeff(&self, b: &[IsoClassId]) -> Scalar {
        self.terms.get(b).cloned().unwrap_or_else(|| Scalar::zero(self.q))
    }
}

/// One summand of the cyclic H-kernel shared by every periodic product:
/// an I-tuple, the resulting M-tuple, and prod_i H^{M_i}_{..}/a_{I_i}.
#[derive(Debug, Clone)]
pub struct KernelTerm {
    pub i_tuple: Vec<IsoClassId>,
    pub m_tuple: Vec<IsoClassId>,
    pub coeff: Scalar,
}

/// Straightened coordinates over the ordered-product basis: each key
/// (A-tuple, alpha-tuple) stands for prod_i u_{A_i[i]} prod_i K_{alpha_i,i}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderedCoords {
    pub terms: BTreeMap<PeriodicBasisElt, Scalar>,
}

/// The periodic Hall algebras at a fixed period m, with a memo for the
/// cyclic kernel sums.
pub struct PeriodicAlgebra<'a> {
    cat: &'a Category,
    m: usize,
    kernels: RefCell<HashMap<(Vec<IsoClassId>, Vec<IsoClassId>), Vec<KernelTerm>>>,
}

impl<'a> PeriodicAlgebra<'a> {
    pub fn new(cat: &'a Category, m: usize) -> Self {
        assert!(m >= 1);
        PeriodicAlgebra { cat, m, kernels: RefCell::new(HashMap::new()) }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn cat(&self) -> &Category {
        self.cat
    }

    fn q(&self) -> u64 {
        self.cat.qv()
    }

    fn nv(&self) -> usize {
        self.cat.quiver().vertex_count()
    }

    pub fn zero_classes(&self) -> Vec<IsoClassId> {
        vec![self.cat.zero_class(); self.m]
    }

    pub fn zero_ks(&self) -> Vec<KClass> {
        vec![KClass::zero(self.nv()); self.m]
    }

    pub fn unit_elt(&self) -> PeriodicBasisElt {
        PeriodicBasisElt { classes: self.zero_classes(), ks: self.zero_ks() }
    }

    pub fn unit(&self) -> PeriodicElt {
        PeriodicElt::basis(self.q(), self.unit_elt())
    }

    /// u_{A[deg]} as a basis element.
    pub fn stalk_elt(&self, deg: usize, class: IsoClassId) -> PeriodicBasisElt {
        let mut classes = self.zero_classes();
        classes[deg % self.m] = class;
        PeriodicBasisElt { classes, ks: self.zero_ks() }
    }

    /// K_{alpha, deg} as a basis element.
    pub fn k_elt(&self, deg: usize, alpha: KClass) -> PeriodicBasisElt {
        let mut ks = self.zero_ks();
        ks[deg % self.m] = alpha;
        PeriodicBasisElt { classes: self.zero_classes(), ks }
    }

    /// The sum over cyclic tuples (I_i, M_i) with the product of dual
    /// derived Hall numbers, shared by (3.4), (4.1), and Corollary 4.4.
    pub fn kernel(&self, a: &[IsoClassId], b: &[IsoClassId]) -> Result<Vec<KernelTerm>> {
        let key = (a.to_vec(), b.to_vec());
        if let Some(k) = self.kernels.borrow().get(&key) {
            return Ok(k.clone());
        }
        let m = self.m;
        // candidate I_i: subobject-sized classes of B_i that also fit in A_{i+1}
        let mut candidates: Vec<Vec<IsoClassId>> = Vec::with_capacity(m);
        for i in 0..m {
            let bound = DimVector(
                b[i].dim
                    .0
                    .iter()
                    .zip(&a[(i + 1) % m].dim.0)
                    .map(|(x, y)| (*x).min(*y))
                    .collect(),
            );
            candidates.push(self.cat.classes_up_to(&bound)?);
        }
        let mut terms = Vec::new();
        let mut pick: Vec<IsoClassId> = Vec::with_capacity(m);
        self.kernel_rec(a, b, &candidates, &mut pick, &mut terms)?;
        self.kernels.borrow_mut().insert(key, terms.clone());
        Ok(terms)
    }

    fn kernel_rec(
        &self,
        a: &[IsoClassId],
        b: &[IsoClassId],
        candidates: &[Vec<IsoClassId>],
        pick: &mut Vec<IsoClassId>,
        out: &mut Vec<KernelTerm>,
    ) -> Result<()> {
        let m = self.m;
        if pick.len() < m {
            for c in &candidates[pick.len()] {
                pick.push(c.clone());
                self.kernel_rec(a, b, candidates, pick, out)?;
                pick.pop();
            }
            return Ok(());
        }
        // per-slot options (M_i, H_i) with H_i != 0
        let q = self.q();
        let mut slot_options: Vec<Vec<(IsoClassId, Scalar)>> = Vec::with_capacity(m);
        for i in 0..m {
            let prev = &pick[(i + m - 1) % m];
            let km = a[i]
                .dim
                .to_kclass()
                .add(&b[i].dim.to_kclass())
                .sub(&pick[i].dim.to_kclass())
                .sub(&prev.dim.to_kclass());
            let mut options = Vec::new();
            for mc in classes_of_kclass(self.cat, &km)? {
                let h = derived_H(self.cat, &pick[i], &a[i], &b[i], prev, &mc)?;
                if !h.is_zero() {
                    options.push((mc, h));
                }
            }
            if options.is_empty() {
                return Ok(());
            }
            slot_options.push(options);
        }
        let a_i_inv: Scalar = {
            let mut p = Scalar::one(q);
            for ic in pick.iter() {
                p *= Scalar::from_u128(q, self.cat.aut_order(ic)?);
            }
            p.inv()?
        };
        // cartesian product of the per-slot options
        let mut idx = vec![0usize; m];
        loop {
            let mut coeff = a_i_inv.clone();
            let mut m_tuple = Vec::with_capacity(m);
            for i in 0..m {
                let (mc, h) = &slot_options[i][idx[i]];
                m_tuple.push(mc.clone());
                coeff *= h.clone();
            }
            out.push(KernelTerm { i_tuple: pick.clone(), m_tuple, coeff });
            let mut i = m;
            loop {
                if i == 0 {
                    return Ok(());
                }
                i -= 1;
                idx[i] += 1;
                if idx[i] < slot_options[i].len() {
                    break;
                }
                idx[i] = 0;
            }
        }
    }

    fn euler(&self, x: &KClass, y: &KClass) -> i64 {
        self.cat.euler_form(x, y)
    }

    fn symm(&self, x: &KClass, y: &KClass) -> i64 {
        self.cat.symmetric_form(x, y)
    }

    /// The sums written `sum_{i=1}^{m-1}` in Definition 3.1, with the
    /// stated m=1 convention: that sum is the single term at index 1,
    /// indices read modulo 1.
    fn convention_range(&self) -> Vec<usize> {
        if self.m == 1 {
            vec![1]
        } else {
            (1..self.m).collect()
        }
    }

    fn wrap(&self, i: usize) -> usize {
        i % self.m
    }

    /// The product (3.4) on basis elements.
    pub fn product_ext_basis(
        &self,
        x: &PeriodicBasisElt,
        y: &PeriodicBasisElt,
    ) -> Result<PeriodicElt> {
        let m = self.m;
        let q = self.q();
        let a = &x.classes;
        let b = &y.classes;
        let alpha = &x.ks;
        let beta = &y.ks;
        let akc: Vec<KClass> = a.iter().map(|c| c.dim.to_kclass()).collect();
        let bkc: Vec<KClass> = b.iter().map(|c| c.dim.to_kclass()).collect();

        // a_0 twist
        let mut a0: i64 = 0;
        for i in 0..m {
            a0 += self.euler(&akc[i], &bkc[i]);
            a0 += self.symm(&alpha[i], &bkc[i].sub(&bkc[self.wrap(i + 1)]));
        }
        for i in self.convention_range() {
            a0 += self.symm(&alpha[self.wrap(i)], &beta[self.wrap(i + m - 1)]);
        }
        a0 -= self.symm(&alpha[m - 1], &beta[0]);

        let mut out = PeriodicElt::zero(q, m);
        for t in self.kernel(a, b)? {
            let ikc: Vec<KClass> = t.i_tuple.iter().map(|c| c.dim.to_kclass()).collect();
            let mkc: Vec<KClass> = t.m_tuple.iter().map(|c| c.dim.to_kclass()).collect();
            let mut e: i64 = -self.symm(&ikc[m - 1], &alpha[0].add(&beta[0]));
            for i in self.convention_range() {
                let j = self.wrap(i + m - 1);
                e += self.symm(&ikc[self.wrap(i)], &alpha[j].add(&beta[j]));
            }
            for i in 0..m {
                e += self.euler(&mkc[i].sub(&mkc[self.wrap(i + 1)]), &ikc[i]);
            }
            for i in self.convention_range() {
                e += self.euler(&ikc[self.wrap(i + m - 1)], &ikc[self.wrap(i)]);
            }
            e -= self.euler(&ikc[0], &ikc[m - 1]);

            let ks: Vec<KClass> = (0..m)
                .map(|i| ikc[i].add(&alpha[i]).add(&beta[i]))
                .collect();
            let coeff = Scalar::v_pow(q, a0 + e) * t.coeff.clone();
            out.add_term(PeriodicBasisElt { classes: t.m_tuple, ks }, coeff);
        }
        Ok(out)
    }

    pub fn product_ext(&self, x: &PeriodicElt, y: &PeriodicElt) -> Result<PeriodicElt> {
        let mut out = PeriodicElt::zero(self.q(), self.m);
        for (bx, cx) in x.terms() {
            for (by, cy) in y.terms() {
                let p = self.product_ext_basis(bx, by)?.scale(&(cx * cy));
                out = out.add(&p);
            }
        }
        Ok(out)
    }

    /// The K-free product (4.1), as written, for any period. Associativity
    /// is only guaranteed for odd m; see `product_odd`.
    pub fn product_odd_formula_basis(
        &self,
        a: &[IsoClassId],
        b: &[IsoClassId],
    ) -> Result<OddPeriodicElt> {
        let m = self.m;
        let q = self.q();
        let akc: Vec<KClass> = a.iter().map(|c| c.dim.to_kclass()).collect();
        let bkc: Vec<KClass> = b.iter().map(|c| c.dim.to_kclass()).collect();
        let mut twist: i64 = 0;
        for i in 0..m {
            let mut alt = KClass::zero(self.nv());
            for k in 0..m {
                let t = &akc[self.wrap(i + k)];
                alt = if k % 2 == 0 { alt.add(t) } else { alt.sub(t) };
            }
            twist += self.euler(&alt, &bkc[i]);
        }
        let mut out = OddPeriodicElt::zero(q, m);
        let tw = Scalar::v_pow(q, twist);
        for t in self.kernel(a, b)? {
            out.add_term(t.m_tuple, tw.clone() * t.coeff);
        }
        Ok(out)
    }

    /// The odd-periodic product; rejects even periods.
    pub fn product_odd(&self, x: &OddPeriodicElt, y: &OddPeriodicElt) -> Result<OddPeriodicElt> {
        if self.m % 2 == 0 {
            return Err(HallError::OddPeriodRequired(self.m));
        }
        self.product_odd_any(x, y)
    }

    /// The (4.1) formula extended bilinearly without the parity guard;
    /// used to exhibit the even-period associativity failure.
    pub fn product_odd_any(&self, x: &OddPeriodicElt, y: &OddPeriodicElt) -> Result<OddPeriodicElt> {
        let mut out = OddPeriodicElt::zero(self.q(), self.m);
        for (bx, cx) in x.terms() {
            for (by, cy) in y.terms() {
                let p = self.product_odd_formula_basis(bx, by)?.scale(&(cx * cy));
                out = out.add(&p);
            }
        }
        Ok(out)
    }

    /// delta of Proposition 3.5: the self-extension dimension of the
    /// boundary stalks A_0 and A_{m-1}.
    pub fn delta_degree(&self, b: &PeriodicBasisElt) -> Result<usize> {
        let a0 = &b.classes[0];
        let am = &b.classes[self.m - 1];
        Ok(self.cat.hom_dim(a0, am)?
            + self.cat.ext1_dim(a0, a0)?
            + self.cat.ext1_dim(am, am)?)
    }

    /// Evaluate the ordered product prod_i u_{A_i[i]} prod_i K_{alpha_i,i}
    /// left to right with the (3.4) product.
    pub fn expand_ordered(&self, b: &PeriodicBasisElt) -> Result<PeriodicElt> {
        let mut acc = self.unit();
        for (i, c) in b.classes.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let f = PeriodicElt::basis(self.q(), self.stalk_elt(i, c.clone()));
            acc = self.product_ext(&acc, &f)?;
        }
        if b.ks.iter().any(|k| !k.is_zero()) {
            let kelt = PeriodicBasisElt { classes: self.zero_classes(), ks: b.ks.clone() };
            acc = self.product_ext(&acc, &PeriodicElt::basis(self.q(), kelt))?;
        }
        Ok(acc)
    }

    /// Coordinates of x over the ordered-product basis of Proposition 3.5.
    ///
    /// For m > 2 this runs the delta-descending rewriting (3.20); for
    /// m <= 2 it eliminates against the expansions of ordered products,
    /// which is triangular in the total stalk dimension.
    pub fn straighten(&self, x: &PeriodicElt) -> Result<OrderedCoords> {
        if self.m > 2 {
            self.straighten_delta(x)
        } else {
            self.straighten_by_dim(x)
        }
    }

    fn straighten_delta(&self, x: &PeriodicElt) -> Result<OrderedCoords> {
        let q = self.q();
        let mut work = x.clone();
        let mut out: BTreeMap<PeriodicBasisElt, Scalar> = BTreeMap::new();
        while let Some((b, c)) = self.pick_max(&work, |b| self.delta_degree(b))? {
            // u(b) = ordered(b) - corrections; corrections have smaller delta
            *out.entry(b.clone()).or_insert_with(|| Scalar::zero(q)) += c.clone();
            work.add_term(b.clone(), -c.clone());
            for (elt, coeff) in self.corrections_320(&b)? {
                work.add_term(elt, coeff * c.clone());
            }
        }
        out.retain(|_, v| !v.is_zero());
        Ok(OrderedCoords { terms: out })
    }

    /// The correction sum of (3.20): everything except the leading term,
    /// negated so that u(b) = ordered(b) + sum of these.
    pub(crate) fn corrections_320(
        &self,
        b: &PeriodicBasisElt,
    ) -> Result<Vec<(PeriodicBasisElt, Scalar)>> {
        let m = self.m;
        let q = self.q();
        let a0 = &b.classes[0];
        let am = &b.classes[m - 1];
        let z = self.cat.zero_class();
        let bound = DimVector(
            a0.dim.0.iter().zip(&am.dim.0).map(|(x, y)| (*x).min(*y)).collect(),
        );
        let mut out = Vec::new();
        for i_cl in self.cat.classes_up_to(&bound)? {
            if i_cl.is_zero() {
                continue;
            }
            let ik = i_cl.dim.to_kclass();
            let m0_dims = a0.dim.checked_sub(&i_cl.dim).unwrap();
            let mm_dims = am.dim.checked_sub(&i_cl.dim).unwrap();
            let ai = Scalar::from_u128(q, self.cat.aut_order(&i_cl)?);
            for m0 in self.cat.enumerate_classes(&m0_dims)? {
                let h0 = derived_H(self.cat, &z, a0, &z, &i_cl, &m0)?;
                if h0.is_zero() {
                    continue;
                }
                for mm in self.cat.enumerate_classes(&mm_dims)? {
                    let hm = derived_H(self.cat, &i_cl, &z, am, &z, &mm)?;
                    if hm.is_zero() {
                        continue;
                    }
                    let e = self.euler(&mm.dim.to_kclass().sub(&m0.dim.to_kclass()), &ik);
                    // K_{I, m-1} slides through prod K_{alpha_i, i} by (3.6)
                    let kslide = self.symm(&ik, &b.ks[self.wrap(2 * m - 2)])
                        - self.symm(&ik, &b.ks[0]);
                    let mut classes = b.classes.clone();
                    classes[0] = m0.clone();
                    classes[m - 1] = mm;
                    let mut ks = b.ks.clone();
                    ks[m - 1] = ks[m - 1].add(&ik);
                    let coeff = Scalar::v_pow(q, e + kslide)
                        * h0.clone()
                        * hm.clone()
                        * ai.inv()?
                        * Scalar::from_int(q, -1);
                    out.push((PeriodicBasisElt { classes, ks }, coeff));
                }
            }
        }
        Ok(out)
    }

    fn straighten_by_dim(&self, x: &PeriodicElt) -> Result<OrderedCoords> {
        let q = self.q();
        let mut work = x.clone();
        let mut out: BTreeMap<PeriodicBasisElt, Scalar> = BTreeMap::new();
        while let Some((b, c)) = self.pick_max(&work, |b| Ok(b.stalk_total_dim()))? {
            let expansion = self.expand_ordered(&b)?;
            let lead = expansion.coeff(&b);
            debug_assert!(!lead.is_zero(), "ordered expansion keeps its leading term");
            let factor = c.clone() * lead.inv()?;
            *out.entry(b.clone()).or_insert_with(|| Scalar::zero(q)) += factor.clone();
            work = work.sub(&expansion.scale(&factor));
        }
        out.retain(|_, v| !v.is_zero());
        Ok(OrderedCoords { terms: out })
    }

    fn pick_max(
        &self,
        x: &PeriodicElt,
        rank: impl Fn(&PeriodicBasisElt) -> Result<usize>,
    ) -> Result<Option<(PeriodicBasisElt, Scalar)>> {
        let mut best: Option<(PeriodicBasisElt, Scalar, usize)> = None;
        for (b, c) in x.terms() {
            let r = rank(b)?;
            let better = match &best {
                None => true,
                Some((bb, _, br)) => r > *br || (r == *br && b < bb),
            };
            if better {
                best = Some((b.clone(), c.clone(), r));
            }
        }
        Ok(best.map(|(b, c, _)| (b, c)))
    }

    /// Evaluate straightened coordinates back into the stalk basis.
    pub fn evaluate_ordered(&self, coords: &OrderedCoords) -> Result<PeriodicElt> {
        let mut acc = PeriodicElt::zero(self.q(), self.m);
        for (b, c) in &coords.terms {
            acc = acc.add(&self.expand_ordered(b)?.scale(c));
        }
        Ok(acc)
    }

    /// lambda_i : u_M K_alpha -> u_{M[i]} K_{alpha, i}.
    pub fn lambda_embed(&self, i: usize, x: &ExtHallElt) -> PeriodicElt {
        let mut out = PeriodicElt::zero(self.q(), self.m);
        for ((cl, alpha), c) in x.terms() {
            let mut classes = self.zero_classes();
            classes[i % self.m] = cl.clone();
            let mut ks = self.zero_ks();
            ks[i % self.m] = alpha.clone();
            out.add_term(PeriodicBasisElt { classes, ks }, c.clone());
        }
        out
    }

    /// mu : (x_0, ..., x_{m-1}) -> prod_i lambda_i(x_i), left to right.
    pub fn mu_tensor(&self, xs: &[ExtHallElt]) -> Result<PeriodicElt> {
        assert_eq!(xs.len(), self.m);
        let mut acc = self.unit();
        for (i, x) in xs.iter().enumerate() {
            acc = self.product_ext(&acc, &self.lambda_embed(i, x))?;
        }
        Ok(acc)
    }

    /// Both displayed sums of Corollary 4.4, tabulated per output tuple:
    /// the left side resolves (A·B) first, the right side (B·C) first.
    #[allow(clippy::type_complexity)]
    pub fn corollary44_tables(
        &self,
        a: &[IsoClassId],
        b: &[IsoClassId],
        c: &[IsoClassId],
    ) -> Result<(
        BTreeMap<Vec<IsoClassId>, Scalar>,
        BTreeMap<Vec<IsoClassId>, Scalar>,
    )> {
        let m = self.m;
        let q = self.q();
        let mut lhs: BTreeMap<Vec<IsoClassId>, Scalar> = BTreeMap::new();
        for t1 in self.kernel(a, b)? {
            let mut exp: i64 = 0;
            for i in 0..m {
                exp -= self.euler(
                    &t1.i_tuple[self.wrap(i + m - 1)].dim.to_kclass(),
                    &c[i].dim.to_kclass(),
                );
            }
            let weight = Scalar::q_pow(q, exp) * t1.coeff.clone();
            for t2 in self.kernel(&t1.m_tuple, c)? {
                let entry = lhs
                    .entry(t2.m_tuple)
                    .or_insert_with(|| Scalar::zero(q));
                *entry += weight.clone() * t2.coeff;
            }
        }
        let mut rhs: BTreeMap<Vec<IsoClassId>, Scalar> = BTreeMap::new();
        for t2 in self.kernel(b, c)? {
            let mut exp: i64 = 0;
            for i in 0..m {
                exp -= self.euler(&a[i].dim.to_kclass(), &t2.i_tuple[i].dim.to_kclass());
            }
            let weight = Scalar::q_pow(q, exp) * t2.coeff.clone();
            for t1 in self.kernel(a, &t2.m_tuple)? {
                let entry = rhs
                    .entry(t1.m_tuple)
                    .or_insert_with(|| Scalar::zero(q));
                *entry += weight.clone() * t1.coeff;
            }
        }
        lhs.retain(|_, v| !v.is_zero());
        rhs.retain(|_, v| !v.is_zero());
        Ok((lhs, rhs))
    }

    /// Both sides of Corollary 4.4 for one output tuple.
    pub fn corollary44_sides(
        &self,
        a: &[IsoClassId],
        b: &[IsoClassId],
        c: &[IsoClassId],
        mt: &[IsoClassId],
    ) -> Result<(Scalar, Scalar)> {
        let q = self.q();
        let (lhs, rhs) = self.corollary44_tables(a, b, c)?;
        Ok((
            lhs.get(mt).cloned().unwrap_or_else(|| Scalar::zero(q)),
            rhs.get(mt).cloned().unwrap_or_else(|| Scalar::zero(q)),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::repcat::{Quiver, DEFAULT_BUDGET};

    fn a1(q: u64) -> Category {
        Category::new(Quiver::a1(), q, DEFAULT_BUDGET).unwrap()
    }

    fn f_class(cat: &Category) -> IsoClassId {
        cat.simple(0).unwrap()
    }

    fn f2_class(cat: &Category) -> IsoClassId {
        cat.enumerate_classes(&DimVector(vec![2])).unwrap()[0].clone()
    }

    #[test]
    fn unit_laws() {
        let c = a1(2);
        for m in [1usize, 2, 3] {
            let alg = PeriodicAlgebra::new(&c, m);
            let f = f_class(&c);
            let x = PeriodicElt::basis(2, alg.stalk_elt(0, f));
            assert_eq!(alg.product_ext(&alg.unit(), &x).unwrap(), x);
            assert_eq!(alg.product_ext(&x, &alg.unit()).unwrap(), x);
        }
    }

    #[test]
    fn m1_square_of_simple() {
        let c = a1(2);
        let alg = PeriodicAlgebra::new(&c, 1);
        let f = f_class(&c);
        let f2 = f2_class(&c);
        let uf = PeriodicElt::basis(2, alg.stalk_elt(0, f));
        let p = alg.product_ext(&uf, &uf).unwrap();
        let half_v = Scalar::ratio(2, 1, 2) * Scalar::v_pow(2, 1);
        assert_eq!(p.coeff(&alg.stalk_elt(0, f2)), half_v);
        let k_term = PeriodicBasisElt {
            classes: alg.zero_classes(),
            ks: vec![KClass(vec![1])],
        };
        assert_eq!(p.coeff(&k_term), half_v);
        assert_eq!(p.terms().len(), 2);
    }

    #[test]
    fn m3_disjoint_degrees() {
        let c = a1(2);
        let alg = PeriodicAlgebra::new(&c, 3);
        let f = f_class(&c);
        let u0 = PeriodicElt::basis(2, alg.stalk_elt(0, f.clone()));
        let u2 = PeriodicElt::basis(2, alg.stalk_elt(2, f.clone()));
        let p = alg.product_ext(&u0, &u2).unwrap();
        let mut split = alg.stalk_elt(0, f.clone());
        split.classes[2] = f.clone();
        assert_eq!(p.coeff(&split), Scalar::one(2));
        assert_eq!(p.coeff(&alg.k_elt(2, KClass(vec![1]))), Scalar::one(2));
        assert_eq!(p.terms().len(), 2);
    }

    #[test]
    fn k_only_products() {
        let c = a1(3);
        for m in [1usize, 2, 3] {
            let alg = PeriodicAlgebra::new(&c, m);
            // (3.6): K-monomial times K-monomial is a v-power times the sum
            let alpha: Vec<KClass> = (0..m).map(|i| KClass(vec![1 + i as i64])).collect();
            let beta: Vec<KClass> = (0..m).map(|i| KClass(vec![2 - i as i64])).collect();
            let ka = PeriodicElt::basis(3, PeriodicBasisElt {
                classes: alg.zero_classes(),
                ks: alpha.clone(),
            });
            let kb = PeriodicElt::basis(3, PeriodicBasisElt {
                classes: alg.zero_classes(),
                ks: beta.clone(),
            });
            let p = alg.product_ext(&ka, &kb).unwrap();
            assert_eq!(p.terms().len(), 1);
            let (elt, coeff) = p.terms().iter().next().unwrap();
            for i in 0..m {
                assert!(elt.classes[i].is_zero());
                assert_eq!(elt.ks[i], alpha[i].add(&beta[i]));
            }
            // exponent of (3.6) in the symmetric form
            let mut exp = -c.symmetric_form(&alpha[m - 1], &beta[0]);
            let range: Vec<usize> = if m == 1 { vec![1] } else { (1..m).collect() };
            for i in range {
                exp += c.symmetric_form(&alpha[i % m], &beta[(i + m - 1) % m]);
            }
            assert_eq!(*coeff, Scalar::v_pow(3, exp), "m={m}");
            // for m <= 2 the K-monomials commute
            if m <= 2 {
                let p2 = alg.product_ext(&kb, &ka).unwrap();
                assert_eq!(p.terms(), p2.terms(), "m={m}");
            }
        }
    }

    #[test]
    fn m1_k_central() {
        let c = a1(2);
        let alg = PeriodicAlgebra::new(&c, 1);
        let f = f_class(&c);
        let uf = PeriodicElt::basis(2, alg.stalk_elt(0, f));
        let k = PeriodicElt::basis(2, alg.k_elt(0, KClass(vec![3])));
        let l = alg.product_ext(&k, &uf).unwrap();
        let r = alg.product_ext(&uf, &k).unwrap();
        assert_eq!(l, r);
    }

    #[test]
    fn odd_products() {
        let c = a1(2);
        let alg = PeriodicAlgebra::new(&c, 3);
        let f = f_class(&c);
        let f2 = f2_class(&c);
        let z = c.zero_class();
        let uf0 = OddPeriodicElt::basis(2, vec![f.clone(), z.clone(), z.clone()]);
        let p = alg.product_odd(&uf0, &uf0).unwrap();
        assert_eq!(
            p.coeff(&[f2.clone(), z.clone(), z.clone()]),
            Scalar::ratio(2, 1, 2) * Scalar::v_pow(2, 1)
        );
        assert_eq!(p.terms().len(), 1);

        let uf1 = OddPeriodicElt::basis(2, vec![z.clone(), f.clone(), z.clone()]);
        let p = alg.product_odd(&uf0, &uf1).unwrap();
        assert_eq!(
            p.coeff(&[f.clone(), f.clone(), z.clone()]),
            Scalar::v_pow(2, 1)
        );
        assert_eq!(p.terms().len(), 1);
    }

    #[test]
    fn odd_rejects_even_period() {
        let c = a1(2);
        let alg = PeriodicAlgebra::new(&c, 2);
        let f = f_class(&c);
        let z = c.zero_class();
        let x = OddPeriodicElt::basis(2, vec![f, z]);
        assert!(matches!(
            alg.product_odd(&x, &x).unwrap_err(),
            HallError::OddPeriodRequired(2)
        ));
        // the raw formula still runs
        alg.product_odd_any(&x, &x).unwrap();
    }

    #[test]
    fn delta_examples() {
        let c = a1(2);
        let alg = PeriodicAlgebra::new(&c, 3);
        let f = f_class(&c);
        let mut b = alg.stalk_elt(0, f.clone());
        b.classes[2] = f.clone();
        assert_eq!(alg.delta_degree(&b).unwrap(), 1);
        assert_eq!(alg.delta_degree(&alg.stalk_elt(0, f)).unwrap(), 0);
        assert_eq!(alg.delta_degree(&alg.unit_elt()).unwrap(), 0);
    }

    #[test]
    fn straighten_m3_example() {
        let c = a1(2);
        let alg = PeriodicAlgebra::new(&c, 3);
        let f = f_class(&c);
        let mut b = alg.stalk_elt(0, f.clone());
        b.classes[2] = f.clone();
        let coords = alg.straighten(&PeriodicElt::basis(2, b.clone())).unwrap();
        // u_{F[0] (+) F[2]} = ordered(F,-,F) - K_{(1),2}
        let ordered_key = b.clone();
        let k_key = alg.k_elt(2, KClass(vec![1]));
        assert_eq!(coords.terms.len(), 2);
        assert_eq!(coords.terms[&ordered_key], Scalar::one(2));
        assert_eq!(coords.terms[&k_key], Scalar::from_int(2, -1));
        // round trip
        let back = alg.evaluate_ordered(&coords).unwrap();
        assert_eq!(back, PeriodicElt::basis(2, b));
    }

    #[test]
    fn straighten_round_trip_small() {
        for q in [2u64] {
            let c = a1(q);
            let f = f_class(&c);
            let f2 = f2_class(&c);
            for m in [1usize, 2, 3] {
                let alg = PeriodicAlgebra::new(&c, m);
                let mut elts = vec![alg.unit_elt()];
                for d in 0..m {
                    elts.push(alg.stalk_elt(d, f.clone()));
                    elts.push(alg.stalk_elt(d, f2.clone()));
                    let mut two = alg.stalk_elt(d, f.clone());
                    two.classes[(d + m - 1) % m] = f.clone();
                    elts.push(two);
                    let mut withk = alg.stalk_elt(d, f.clone());
                    withk.ks[0] = KClass(vec![1]);
                    elts.push(withk);
                }
                for b in elts {
                    let x = PeriodicElt::basis(q, b.clone());
                    let coords = alg.straighten(&x).unwrap();
                    let back = alg.evaluate_ordered(&coords).unwrap();
                    assert_eq!(back, x, "m={m} b={b}");
                }
            }
        }
    }

    #[test]
    fn lambda_and_mu() {
        let c = a1(2);
        let alg = PeriodicAlgebra::new(&c, 3);
        let f = f_class(&c);
        let one = ExtHallElt::unit(&c);
        assert_eq!(alg.mu_tensor(&[one.clone(), one.clone(), one.clone()]).unwrap(), alg.unit());
        // mu(u_F, 1, u_F) = u_{F[0]} u_{F[2]} = u_{F[0](+)F[2]} + K_{(1),2}
        let uf = ExtHallElt::basis(2, f.clone(), KClass::zero(1));
        let p = alg.mu_tensor(&[uf.clone(), one.clone(), uf.clone()]).unwrap();
        let mut split = alg.stalk_elt(0, f.clone());
        split.classes[2] = f.clone();
        assert_eq!(p.coeff(&split), Scalar::one(2));
        assert_eq!(p.coeff(&alg.k_elt(2, KClass(vec![1]))), Scalar::one(2));
    }

    #[test]
    fn corollary44_trivial_and_spot() {
        let c = a1(2);
        let alg = PeriodicAlgebra::new(&c, 3);
        let z = c.zero_class();
        let f = f_class(&c);
        let zs = vec![z.clone(), z.clone(), z.clone()];
        let (l, r) = alg.corollary44_sides(&zs, &zs, &zs, &zs).unwrap();
        assert_eq!(l, Scalar::one(2));
        assert_eq!(r, Scalar::one(2));
        // class mismatch
        let fs = vec![f.clone(), z.clone(), z.clone()];
        let (l, r) = alg.corollary44_sides(&fs, &zs, &zs, &zs).unwrap();
        assert!(l.is_zero() && r.is_zero());
        // a nontrivial instance must balance
        let (l, r) = alg.corollary44_sides(&fs, &fs, &fs, &{
            let f3 = c.enumerate_classes(&DimVector(vec![3])).unwrap()[0].clone();
            vec![f3, z.clone(), z.clone()]
        }).unwrap();
        assert_eq!(l, r);
        assert!(!l.is_zero());
    }

    #[test]
    fn ext_associativity_m2_small() {
        // the extended algebra is associative for every m, including 2
        let c = a1(2);
        let alg = PeriodicAlgebra::new(&c, 2);
        let f = f_class(&c);
        let mut elts = Vec::new();
        for d in 0..2 {
            elts.push(alg.stalk_elt(d, f.clone()));
        }
        elts.push(alg.k_elt(0, KClass(vec![1])));
        elts.push(alg.k_elt(1, KClass(vec![-1])));
        for x in &elts {
            for y in &elts {
                for w in &elts {
                    let ex = PeriodicElt::basis(2, x.clone());
                    let ey = PeriodicElt::basis(2, y.clone());
                    let ew = PeriodicElt::basis(2, w.clone());
                    let l = alg
                        .product_ext(&alg.product_ext(&ex, &ey).unwrap(), &ew)
                        .unwrap();
                    let r = alg
                        .product_ext(&ex, &alg.product_ext(&ey, &ew).unwrap())
                        .unwrap();
                    assert_eq!(l, r, "({x})({y})({w})");
                }
            }
        }
    }
}
