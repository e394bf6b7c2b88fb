//! The Ringel-Hall algebra of a quiver-representation category: untwisted,
//! twisted (by v^{<M,N>}), and extended by Grothendieck-group elements K_a,
//! plus Green's formula evaluated on both sides.

use std::collections::BTreeMap;

use crate::repcat::{Category, IsoClassId, KClass};
use crate::scalar::Scalar;
use crate::Result;

/// A finite linear combination of basis elements u_[M].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HallElt {
    q: u64,
    terms: BTreeMap<IsoClassId, Scalar>,
}

impl HallElt {
    pub fn zero(q: u64) -> Self {
        HallElt { q, terms: BTreeMap::new() }
    }

    pub fn basis(q: u64, m: IsoClassId) -> Self {
        let mut e = HallElt::zero(q);
        e.add_term(m, Scalar::one(q));
        e
    }

    /// The unit u_0.
    pub fn unit(cat: &Category) -> Self {
        HallElt::basis(cat.qv(), cat.zero_class())
    }

    pub fn add_term(&mut self, m: IsoClassId, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m).or_insert_with(|| Scalar::zero(self.q));
        *entry += c;
        // keep the no-explicit-zeros invariant
        let dead: Vec<IsoClassId> = self
            .terms
            .iter()
            .filter(|(_, v)| v.is_zero())
            .map(|(k, _)| k.clone())
            .collect();
        for k in dead {
            self.terms.remove(&k);
        }
    }

    pub fn scale(&self, c: &Scalar) -> HallElt {
        let mut out = HallElt::zero(self.q);
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v * c);
        }
        out
    }

    pub fn add(&self, other: &HallElt) -> HallElt {
        let mut out = self.clone();
        for (m, v) in &other.terms {
            out.add_term(m.clone(), v.clone());
        }
        out
    }

    pub fn sub(&self, other: &HallElt) -> HallElt {
        self.add(&other.scale(&Scalar::from_int(self.q, -1)))
    }

    pub fn terms(&self) -> &BTreeMap<IsoClassId, Scalar> {
        &self.terms
    }

    pub fn coeff(&self, m: &IsoClassId) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(|| Scalar::zero(self.q))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

/// A finite linear combination of basis elements u_[M] K_a, K's on the right.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtHallElt {
    q: u64,
    terms: BTreeMap<(IsoClassId, KClass), Scalar>,
}

impl ExtHallElt {
    pub fn zero(q: u64) -> Self {
        ExtHallElt { q, terms: BTreeMap::new() }
    }

    pub fn basis(q: u64, m: IsoClassId, alpha: KClass) -> Self {
        let mut e = ExtHallElt::zero(q);
        e.add_term(m, alpha, Scalar::one(q));
        e
    }

    pub fn unit(cat: &Category) -> Self {
        ExtHallElt::basis(
            cat.qv(),
            cat.zero_class(),
            KClass::zero(cat.quiver().vertex_count()),
        )
    }

    pub fn add_term(&mut self, m: IsoClassId, alpha: KClass, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let entry = self
            .terms
            .entry((m, alpha))
            .or_insert_with(|| Scalar::zero(self.q));
        *entry += c;
        let dead: Vec<(IsoClassId, KClass)> = self
            .terms
            .iter()
            .filter(|(_, v)| v.is_zero())
            .map(|(k, _)| k.clone())
            .collect();
        for k in dead {
            self.terms.remove(&k);
        }
    }

    pub fn scale(&self, c: &Scalar) -> ExtHallElt {
        let mut out = ExtHallElt::zero(self.q);
        for ((m, a), v) in &self.terms {
            out.add_term(m.clone(), a.clone(), v * c);
        }
        out
    }

    pub fn add(&self, other: &ExtHallElt) -> ExtHallElt {
        let mut out = self.clone();
        for ((m, a), v) in &other.terms {
            out.add_term(m.clone(), a.clone(), v.clone());
        }
        out
    }

    pub fn sub(&self, other: &ExtHallElt) -> ExtHallElt {
        self.add(&other.scale(&Scalar::from_int(self.q, -1)))
    }

    pub fn terms(&self) -> &BTreeMap<(IsoClassId, KClass), Scalar> {
        &self.terms
    }

    pub fn coeff(&self, m: &IsoClassId, alpha: &KClass) -> Scalar {
        self.terms
            .get(&(m.clone(), alpha.clone()))
            .cloned()
            .unwrap_or_else(|| Scalar::zero(self.q))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

/// u_M <> u_N = sum_L (|Ext^1(M,N)_L| / |Hom(M,N)|) u_L on basis elements.
pub fn product_untwisted_basis(cat: &Category, m: &IsoClassId, n: &IsoClassId) -> Result<HallElt> {
    let q = cat.qv();
    let hom = cat.hom_dim(m, n)?;
    let hom_inv = Scalar::q_pow(q, -(hom as i64));
    let mut out = HallElt::zero(q);
    for (l, count) in cat.ext_fibers(m, n)? {
        out.add_term(l, Scalar::from_u128(q, count) * hom_inv.clone());
    }
    Ok(out)
}

pub fn product_untwisted(cat: &Category, x: &HallElt, y: &HallElt) -> Result<HallElt> {
    let mut out = HallElt::zero(cat.qv());
    for (m, cm) in x.terms() {
        for (n, cn) in y.terms() {
            let p = product_untwisted_basis(cat, m, n)?.scale(&(cm * cn));
            out = out.add(&p);
        }
    }
    Ok(out)
}

/// Twisted product: v^{<M,N>} u_M <> u_N.
pub fn product_twisted_basis(cat: &Category, m: &IsoClassId, n: &IsoClassId) -> Result<HallElt> {
    let e = cat.euler_classes(m, n);
    Ok(product_untwisted_basis(cat, m, n)?.scale(&Scalar::v_pow(cat.qv(), e)))
}

pub fn product_twisted(cat: &Category, x: &HallElt, y: &HallElt) -> Result<HallElt> {
    let mut out = HallElt::zero(cat.qv());
    for (m, cm) in x.terms() {
        for (n, cn) in y.terms() {
            let p = product_twisted_basis(cat, m, n)?.scale(&(cm * cn));
            out = out.add(&p);
        }
    }
    Ok(out)
}

/// Extended product on normal-form monomials:
/// (u_M K_a)(u_N K_b) = v^{(a, N)} (u_M u_N) K_{a+b}.
pub fn product_extended(cat: &Category, x: &ExtHallElt, y: &ExtHallElt) -> Result<ExtHallElt> {
    let q = cat.qv();
    let mut out = ExtHallElt::zero(q);
    for ((m, alpha), cm) in x.terms() {
        for ((n, beta), cn) in y.terms() {
            let swap = Scalar::v_pow(q, cat.symmetric_form(alpha, &n.dim.to_kclass()));
            let prod = product_twisted_basis(cat, m, n)?;
            let gamma = alpha.add(beta);
            let c = cm * cn * swap;
            for (l, cl) in prod.terms() {
                out.add_term(l.clone(), gamma.clone(), cl * &c);
            }
        }
    }
    Ok(out)
}

/// Both sides of Green's formula for (M, N, M', N'), as exact scalars.
///
/// Left:  a_M a_N a_M' a_N' sum_L g^L_{M,N} g^L_{M',N'} / a_L.
/// Right: sum q^{-<A,B'>} g^M_{A,A'} g^N_{B,B'} g^M'_{A,B} g^N'_{A',B'}
///        a_A a_A' a_B a_B'.
pub fn green_sides(
    cat: &Category,
    m: &IsoClassId,
    n: &IsoClassId,
    mp: &IsoClassId,
    np: &IsoClassId,
) -> Result<(Scalar, Scalar)> {
    let q = cat.qv();
    // both sides vanish unless the dimension vectors balance
    if m.dim.add(&n.dim) != mp.dim.add(&np.dim) {
        return Ok((Scalar::zero(q), Scalar::zero(q)));
    }

    let a = |c: &IsoClassId| -> Result<Scalar> { Ok(Scalar::from_u128(q, cat.aut_order(c)?)) };

    let mut lhs = Scalar::zero(q);
    for l in cat.enumerate_classes(&m.dim.add(&n.dim))? {
        let g1 = cat.hall_number(&l, m, n)?;
        if g1 == 0 {
            continue;
        }
        let g2 = cat.hall_number(&l, mp, np)?;
        if g2 == 0 {
            continue;
        }
        lhs += Scalar::from_u128(q, g1 * g2) * a(&l)?.inv()?;
    }
    lhs *= a(m)? * a(n)? * a(mp)? * a(np)?;

    let mut rhs = Scalar::zero(q);
    // A runs over classes fitting inside both M and M'; the other three
    // dimension vectors are then forced.
    for da in crate::repcat::DimVector::box_up_to(&m.dim) {
        if !da.le(&mp.dim) {
            continue;
        }
        let dap = m.dim.checked_sub(&da).unwrap();
        let db = mp.dim.checked_sub(&da).unwrap();
        let dbp = match n.dim.checked_sub(&db) {
            Some(d) => d,
            None => continue,
        };
        if np.dim.checked_sub(&dap).map_or(true, |d| d != dbp) {
            continue;
        }
        for ca in cat.enumerate_classes(&da)? {
            for cap in cat.enumerate_classes(&dap)? {
                let gm = cat.hall_number(m, &ca, &cap)?;
                if gm == 0 {
                    continue;
                }
                for cb in cat.enumerate_classes(&db)? {
                    let gmp = cat.hall_number(mp, &ca, &cb)?;
                    if gmp == 0 {
                        continue;
                    }
                    for cbp in cat.enumerate_classes(&dbp)? {
                        let gn = cat.hall_number(n, &cb, &cbp)?;
                        if gn == 0 {
                            continue;
                        }
                        let gnp = cat.hall_number(np, &cap, &cbp)?;
                        if gnp == 0 {
                            continue;
                        }
                        let twist = Scalar::q_pow(
                            q,
                            -cat.euler_form(&da.to_kclass(), &dbp.to_kclass()),
                        );
                        rhs += Scalar::from_u128(q, gm * gn * gmp * gnp)
                            * twist
                            * a(&ca)?
                            * a(&cap)?
                            * a(&cb)?
                            * a(&cbp)?;
                    }
                }
            }
        }
    }
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::repcat::{DimVector, Quiver, Rep, DEFAULT_BUDGET};

    fn a1(q: u64) -> Category {
        Category::new(Quiver::a1(), q, DEFAULT_BUDGET).unwrap()
    }

    fn a2(q: u64) -> Category {
        Category::new(Quiver::a2(), q, DEFAULT_BUDGET).unwrap()
    }

    fn indec_p(cat: &Category) -> IsoClassId {
        let mut r = Rep::with_dims(cat.quiver(), DimVector(vec![1, 1]));
        r.mats[0].set(0, 0, 1);
        cat.canonical_id(&r).unwrap()
    }

    #[test]
    fn unit_laws() {
        let c = a1(2);
        let f = c.simple(0).unwrap();
        let uf = HallElt::basis(2, f.clone());
        let one = HallElt::unit(&c);
        assert_eq!(product_untwisted(&c, &one, &uf).unwrap(), uf);
        assert_eq!(product_untwisted(&c, &uf, &one).unwrap(), uf);
        assert_eq!(product_twisted(&c, &one, &uf).unwrap(), uf);
    }

    #[test]
    fn a1_square_of_simple() {
        let c = a1(2);
        let f = c.simple(0).unwrap();
        let f2 = c.enumerate_classes(&DimVector(vec![2])).unwrap()[0].clone();
        let p = product_untwisted_basis(&c, &f, &f).unwrap();
        assert_eq!(p.terms().len(), 1);
        assert_eq!(p.coeff(&f2), Scalar::ratio(2, 1, 2));
        // twisted: <F,F> = 1 gives an extra factor v
        let pt = product_twisted_basis(&c, &f, &f).unwrap();
        assert_eq!(pt.coeff(&f2), Scalar::ratio(2, 1, 2) * Scalar::v_pow(2, 1));
    }

    #[test]
    fn a2_simple_products() {
        let c = a2(2);
        let s1 = c.simple(0).unwrap();
        let s2 = c.simple(1).unwrap();
        let split = c
            .canonical_id(&Rep::with_dims(c.quiver(), DimVector(vec![1, 1])))
            .unwrap();
        let p = indec_p(&c);
        let prod = product_untwisted_basis(&c, &s1, &s2).unwrap();
        assert_eq!(prod.coeff(&split), Scalar::one(2));
        assert_eq!(prod.coeff(&p), Scalar::one(2));
        assert_eq!(prod.terms().len(), 2);
        let tw = product_twisted_basis(&c, &s1, &s2).unwrap();
        assert_eq!(tw.coeff(&split), Scalar::v_pow(2, -1));
        assert_eq!(tw.coeff(&p), Scalar::v_pow(2, -1));
        // the other order has no extension
        let back = product_untwisted_basis(&c, &s2, &s1).unwrap();
        assert_eq!(back.coeff(&p), Scalar::zero(2));
        assert_eq!(back.coeff(&split), Scalar::one(2));
    }

    #[test]
    fn extended_k_relations() {
        let c = a2(2);
        let zero = c.zero_class();
        let k = |v: Vec<i64>| KClass(v);
        let ka = ExtHallElt::basis(2, zero.clone(), k(vec![1, 0]));
        let kb = ExtHallElt::basis(2, zero.clone(), k(vec![0, 2]));
        let kab = ExtHallElt::basis(2, zero.clone(), k(vec![1, 2]));
        assert_eq!(product_extended(&c, &ka, &kb).unwrap(), kab);
        assert_eq!(product_extended(&c, &kb, &ka).unwrap(), kab);

        // K_{(1,0)} u_{S_2} = v^{-1} u_{S_2} K_{(1,0)}
        let s2 = c.simple(1).unwrap();
        let us2 = ExtHallElt::basis(2, s2.clone(), KClass::zero(2));
        let lhs = product_extended(&c, &ka, &us2).unwrap();
        let rhs = ExtHallElt::basis(2, s2, k(vec![1, 0])).scale(&Scalar::v_pow(2, -1));
        assert_eq!(lhs, rhs);

        // K_0 is central and acts as identity on a mixed element
        let p = indec_p(&c);
        let x = ExtHallElt::basis(2, p, k(vec![2, -1]));
        let k0 = ExtHallElt::basis(2, c.zero_class(), KClass::zero(2));
        assert_eq!(product_extended(&c, &k0, &x).unwrap(), x);
        assert_eq!(product_extended(&c, &x, &k0).unwrap(), x);
    }

    #[test]
    fn green_trivial_and_a1() {
        let c = a1(2);
        let z = c.zero_class();
        let (l, r) = green_sides(&c, &z, &z, &z, &z).unwrap();
        assert_eq!(l, Scalar::one(2));
        assert_eq!(r, Scalar::one(2));

        let f = c.simple(0).unwrap();
        let (l, r) = green_sides(&c, &f, &f, &f, &f).unwrap();
        assert_eq!(l, Scalar::ratio(2, 3, 2));
        assert_eq!(r, Scalar::ratio(2, 3, 2));
    }

    #[test]
    fn green_a2_spot() {
        let c = a2(2);
        let s1 = c.simple(0).unwrap();
        let s2 = c.simple(1).unwrap();
        let (l, r) = green_sides(&c, &s1, &s2, &s1, &s2).unwrap();
        assert_eq!(l, r);
        assert!(!l.is_zero());
    }

    #[test]
    fn mu_generators_give_hall_numbers() {
        // (u_M/a_M)(u_N/a_N) = sum_L g^L_{M,N} (u_L/a_L), untwisted
        let c = a2(3);
        let classes = c.classes_up_to(&DimVector(vec![1, 1])).unwrap();
        for m in &classes {
            for n in &classes {
                let am = Scalar::from_u128(3, c.aut_order(m).unwrap());
                let an = Scalar::from_u128(3, c.aut_order(n).unwrap());
                let p = product_untwisted_basis(&c, m, n)
                    .unwrap()
                    .scale(&(am * an).inv().unwrap());
                for (l, coeff) in p.terms() {
                    let al = Scalar::from_u128(3, c.aut_order(l).unwrap());
                    let g = Scalar::from_u128(3, c.hall_number(l, m, n).unwrap());
                    assert_eq!(coeff * &al, g, "M={m} N={n} L={l}");
                }
            }
        }
    }

    #[test]
    fn untwisted_associativity_small() {
        let c = a1(3);
        let classes = c.classes_up_to_total(&DimVector(vec![2]), 2).unwrap();
        for x in &classes {
            for y in &classes {
                for z in &classes {
                    let ex = HallElt::basis(3, x.clone());
                    let ey = HallElt::basis(3, y.clone());
                    let ez = HallElt::basis(3, z.clone());
                    let l = product_twisted(
                        &c,
                        &product_twisted(&c, &ex, &ey).unwrap(),
                        &ez,
                    )
                    .unwrap();
                    let r = product_twisted(
                        &c,
                        &ex,
                        &product_twisted(&c, &ey, &ez).unwrap(),
                    )
                    .unwrap();
                    assert_eq!(l, r, "({x} {y}) {z}");
                }
            }
        }
    }
}
