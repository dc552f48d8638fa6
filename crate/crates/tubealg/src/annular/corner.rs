//! The weight-`k` centralizer corner of the tube algebra, realized as the
//! Jones-Wenzl cutdown of the affine Temperley-Lieb space.
//!
//! Basis elements are labelled `(rank m, winding n)` with `m <= k` of the
//! parity of `k`; for `m = 0` the second index counts noncontractible
//! circles. The basis element is the Jones-Wenzl sandwich of the hatted
//! shape [`AnnDiagram::corner_shape`]. Coefficient extraction uses the fact
//! that expanding the sandwich in raw annular diagrams yields the hatted
//! shape with coefficient one, and every other term carries a cap or cup in
//! direct (non-seam) position, so reading off the hatted classes recovers
//! the basis coordinates.

use std::collections::BTreeMap;

use num::traits::One;

use crate::error::{Result, TubeError};
use crate::scalar::{ParamKind, Rat, Scalar};
use crate::tl::{TLElement, TlContext};

use super::diagram::{AnnDiagram, Side};
use super::element::AnnElement;
use super::tube::{shape_tube, tube_to_cover, TubeRect};

pub type CornerLabel = (usize, i64);

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CornerElement {
    k: usize,
    terms: BTreeMap<CornerLabel, Scalar>,
}

pub fn label_valid(k: usize, (m, n): CornerLabel) -> bool {
    m <= k && (k - m) % 2 == 0 && (m > 0 || n >= 0)
}

impl CornerElement {
    pub fn zero(k: usize) -> Self {
        CornerElement {
            k,
            terms: BTreeMap::new(),
        }
    }

    /// The corner unit `p_k`.
    pub fn unit(k: usize) -> Self {
        CornerElement::basis(k, (k, 0))
    }

    pub fn basis(k: usize, label: CornerLabel) -> Self {
        assert!(label_valid(k, label), "bad corner label {label:?} at k={k}");
        let mut terms = BTreeMap::new();
        terms.insert(label, Scalar::one(ParamKind::Circle));
        CornerElement { k, terms }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn terms(&self) -> impl Iterator<Item = (&CornerLabel, &Scalar)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, label: CornerLabel) -> Scalar {
        self.terms
            .get(&label)
            .cloned()
            .unwrap_or_else(|| Scalar::zero(ParamKind::Circle))
    }

    pub fn add_term(&mut self, label: CornerLabel, c: Scalar) {
        assert!(label_valid(self.k, label));
        if c.is_zero() {
            return;
        }
        match self.terms.entry(label) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = &*o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &CornerElement) -> CornerElement {
        assert_eq!(self.k, other.k);
        let mut out = self.clone();
        for (l, c) in &other.terms {
            out.add_term(*l, c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> CornerElement {
        let mut out = CornerElement::zero(self.k);
        for (l, v) in &self.terms {
            out.add_term(*l, v * c);
        }
        out
    }

    pub fn sub(&self, other: &CornerElement) -> CornerElement {
        self.add(&other.scale(&Scalar::constant(ParamKind::Circle, -Rat::one())))
    }

    /// The `#` involution: reverses windings and conjugates coefficients.
    pub fn star(&self) -> CornerElement {
        let mut out = CornerElement::zero(self.k);
        for (&(m, n), c) in &self.terms {
            let label = if m == 0 { (0, n) } else { (m, -n) };
            out.add_term(label, c.involute());
        }
        out
    }

    /// Serializes as a map keyed by `"m,n"` strings.
    pub fn to_json(&self) -> serde_json::Value {
        let map: BTreeMap<String, serde_json::Value> = self
            .terms
            .iter()
            .map(|((m, n), c)| (format!("{m},{n}"), c.to_json()))
            .collect();
        serde_json::json!({ "k": self.k, "terms": map })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let k = v["k"]
            .as_u64()
            .ok_or_else(|| TubeError::InvalidParam("corner json needs k".into()))?
            as usize;
        let mut out = CornerElement::zero(k);
        let map = v["terms"]
            .as_object()
            .ok_or_else(|| TubeError::InvalidParam("corner json needs terms".into()))?;
        for (key, cv) in map {
            let (ms, ns) = key
                .split_once(',')
                .ok_or_else(|| TubeError::InvalidParam(format!("bad corner key {key}")))?;
            let m: usize = ms
                .parse()
                .map_err(|_| TubeError::InvalidParam(format!("bad rank in {key}")))?;
            let n: i64 = ns
                .parse()
                .map_err(|_| TubeError::InvalidParam(format!("bad winding in {key}")))?;
            if !label_valid(k, (m, n)) {
                return Err(TubeError::InvalidParam(format!(
                    "label {key} invalid at k={k}"
                )));
            }
            out.add_term((m, n), Scalar::from_json(ParamKind::Circle, cv)?);
        }
        Ok(out)
    }
}

/// The truncated corner basis: ranks `k, k-2, ...` down to rank defect
/// `2 * max_rank_defect`, windings `|n| <= max_winding` (circles `0..=max`
/// at rank zero).
pub fn corner_basis(k: usize, max_rank_defect: usize, max_winding: i64) -> Vec<CornerElement> {
    let mut out = Vec::new();
    let mut m = k as i64;
    let mut defect = 0usize;
    while m >= 0 && defect <= max_rank_defect {
        if m == 0 {
            for n in 0..=max_winding {
                out.push(CornerElement::basis(k, (0, n)));
            }
        } else {
            for n in -max_winding..=max_winding {
                out.push(CornerElement::basis(k, (m as usize, n)));
            }
        }
        m -= 2;
        defect += 1;
    }
    out
}

/// Recognizes a raw diagram as a hatted basis shape.
pub fn as_corner_label(d: &AnnDiagram) -> Option<CornerLabel> {
    let k = d.inner();
    if d.outer() != k {
        return None;
    }
    let r = d.rank();
    let c = (k - r) / 2;
    for j in 0..c {
        if d.inner_partner(j) != (Side::Inner, -(j as i64 + 1)) {
            return None;
        }
        if d.outer_partner(j) != (Side::Outer, -(j as i64 + 1)) {
            return None;
        }
    }
    if r == 0 {
        return Some((0, d.loops() as i64));
    }
    let (side, z) = d.inner_partner(c);
    if side != Side::Outer {
        return None;
    }
    let zz = z - c as i64;
    let sm = zz.rem_euclid(k as i64);
    if sm >= r as i64 {
        return None;
    }
    let t = (zz - sm) / k as i64;
    let n = sm + t * r as i64;
    for a in 0..r {
        let slot = a as i64 + n;
        let s2 = slot.rem_euclid(r as i64);
        let tt = (slot - s2) / r as i64;
        if d.inner_partner(c + a) != (Side::Outer, c as i64 + s2 + tt * k as i64) {
            return None;
        }
    }
    Some((r, n))
}

/// Reads off the basis coordinates of an element of the corner from its raw
/// annular expansion, dropping the capped remainder terms.
pub fn extract(k: usize, raw: &AnnElement) -> Result<CornerElement> {
    if raw.inner() != k || raw.outer() != k {
        return Err(TubeError::BoundaryMismatch(format!(
            "extract expects a ({k},{k}) element"
        )));
    }
    let mut out = CornerElement::zero(k);
    for (d, c) in raw.terms() {
        if let Some(label) = as_corner_label(d) {
            out.add_term(label, c.clone());
        }
    }
    Ok(out)
}

/// The raw annular expansion `f_k . shape(a) . f_k`.
pub fn corner_raw(ctx: &TlContext, a: &CornerElement) -> Result<AnnElement> {
    let k = a.k();
    let fk = AnnElement::from_tl(&ctx.jones_wenzl(k));
    let mut shapes = AnnElement::zero(k, k);
    for (&(m, n), c) in a.terms() {
        shapes.add_term(AnnDiagram::corner_shape(k, m, n), c.clone());
    }
    fk.compose(ctx, &shapes.compose(ctx, &fk)?)
}

/// Corner multiplication: raw composition `f_k shape(a) f_k shape(b) f_k`
/// followed by coefficient extraction.
pub fn corner_mul(ctx: &TlContext, a: &CornerElement, b: &CornerElement) -> Result<CornerElement> {
    if a.k() != b.k() {
        return Err(TubeError::BoundaryMismatch(format!(
            "corner product at weights {} and {}",
            a.k(),
            b.k()
        )));
    }
    let k = a.k();
    let fk = AnnElement::from_tl(&ctx.jones_wenzl(k));
    let mut sa = AnnElement::zero(k, k);
    for (&(m, n), c) in a.terms() {
        sa.add_term(AnnDiagram::corner_shape(k, m, n), c.clone());
    }
    let mut sb = AnnElement::zero(k, k);
    for (&(m, n), c) in b.terms() {
        sb.add_term(AnnDiagram::corner_shape(k, m, n), c.clone());
    }
    let inner = sb.compose(ctx, &fk)?;
    let mid = fk.compose(ctx, &inner)?;
    let upper = sa.compose(ctx, &mid)?;
    let raw = fk.compose(ctx, &upper)?;
    extract(k, &raw)
}

/// Side-bundle size of the minimal tube form of a basis shape.
pub fn side_size(k: usize, (m, n): CornerLabel) -> usize {
    if m == 0 {
        k + n.max(0) as usize
    } else {
        (k - m) + n.unsigned_abs() as usize
    }
}

/// The grade-`j` component of a single basis element: the isotypic projector
///`P^j` inserted on the side bundle of the minimal tube form, re-expanded in
/// the corner basis.
pub fn grade_component_basis(
    ctx: &TlContext,
    k: usize,
    label: CornerLabel,
    j: usize,
) -> Result<CornerElement> {
    let s = side_size(k, label);
    if j > s || (s - j) % 2 != 0 {
        return Ok(CornerElement::zero(k));
    }
    let tube = shape_tube(k, label.0, label.1);
    debug_assert_eq!(tube.side, s);
    let pj = ctx.isotypic_projector(s, j)?;
    let fk = ctx.jones_wenzl(k);
    let mid = pj.tensor(&fk);
    let rect_elem = ctx.compose(&mid, &TLElement::from_diagram(tube.rect.clone()))?;
    let mut covered = AnnElement::zero(k, k);
    for (d, c) in rect_elem.terms() {
        let tr = TubeRect::new(s, k, k, d.clone())?;
        let (ad, circles) = tube_to_cover(&tr)?;
        covered.add_term(ad, c.scale(&ctx.delta_pow(circles)));
    }
    let fk_ann = AnnElement::from_tl(&fk);
    let full = fk_ann.compose(ctx, &covered)?;
    extract(k, &full)
}

/// Decomposes a corner element by the simple side label of its tube form.
/// The components reassemble to the element exactly.
pub fn grade_decompose(
    ctx: &TlContext,
    a: &CornerElement,
) -> Result<BTreeMap<usize, CornerElement>> {
    let k = a.k();
    let mut out: BTreeMap<usize, CornerElement> = BTreeMap::new();
    for (&label, c) in a.terms() {
        let s = side_size(k, label);
        for j in (s % 2..=s).step_by(2) {
            let comp = grade_component_basis(ctx, k, label, j)?.scale(c);
            if comp.is_zero() {
                continue;
            }
            match out.entry(j) {
                std::collections::btree_map::Entry::Vacant(v) => {
                    v.insert(comp);
                }
                std::collections::btree_map::Entry::Occupied(mut o) => {
                    let s = o.get().add(&comp);
                    if s.is_zero() {
                        o.remove();
                    } else {
                        *o.get_mut() = s;
                    }
                }
            }
        }
    }
    Ok(out)
}

/// The normalized grade-zero functional `omega` on a basis element: the
/// grade-zero component is a rational multiple of the unit `p_k`, and this
/// returns that multiple.
pub fn omega_basis(ctx: &TlContext, k: usize, label: CornerLabel) -> Result<Rat> {
    let comp = grade_component_basis(ctx, k, label, 0)?;
    for (&l, _) in comp.terms() {
        if l != (k, 0) {
            return Err(TubeError::InvalidDiagram(format!(
                "grade-zero component of {label:?} is not a multiple of the unit (found {l:?})"
            )));
        }
    }
    Ok(comp
        .coeff((k, 0))
        .as_constant()
        .expect("rational grade-zero coefficient"))
}

/// `omega(a)`: normalized trace; `Omega(a) = [k+1] omega(a)` is the
/// unnormalized variant.
pub fn omega(ctx: &TlContext, a: &CornerElement) -> Result<Rat> {
    let mut acc = Rat::from_integer(0.into());
    for (&label, c) in a.terms() {
        let w = omega_basis(ctx, a.k(), label)?;
        let cc = c
            .as_constant()
            .ok_or_else(|| TubeError::InvalidParam("omega needs constant coefficients".into()))?;
        acc += w * cc;
    }
    Ok(acc)
}

pub fn omega_unnormalized(ctx: &TlContext, a: &CornerElement) -> Result<Rat> {
    Ok(omega(ctx, a)? * ctx.param().qint(a.k() as i64 + 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat_int, QParam};

    fn ctx(q: i64) -> TlContext {
        TlContext::new(QParam::new(rat_int(q)).unwrap())
    }

    #[test]
    fn basis_enumeration_examples() {
        let labels = |k, d, w| -> Vec<CornerLabel> {
            corner_basis(k, d, w)
                .iter()
                .map(|b| *b.terms().next().unwrap().0)
                .collect()
        };
        assert_eq!(labels(1, 0, 1), vec![(1, -1), (1, 0), (1, 1)]);
        assert_eq!(labels(0, 0, 2), vec![(0, 0), (0, 1), (0, 2)]);
        assert_eq!(
            labels(2, 1, 1),
            vec![(2, -1), (2, 0), (2, 1), (diag_rank_zero(), 0), (0, 1)]
        );
    }

    fn diag_rank_zero() -> usize {
        0
    }

    #[test]
    fn extraction_recovers_basis() {
        for q in [1, 2] {
            let c = ctx(q);
            for k in 0..=3usize {
                for b in corner_basis(k, k / 2, 2) {
                    let raw = corner_raw(&c, &b).unwrap();
                    let back = extract(k, &raw).unwrap();
                    assert_eq!(back, b, "extract(raw(b)) at k={k} q={q}");
                }
            }
        }
    }

    #[test]
    fn unit_acts_as_identity() {
        for q in [1, 2] {
            let c = ctx(q);
            for k in 0..=3usize {
                let p = CornerElement::unit(k);
                for b in corner_basis(k, k / 2, 2) {
                    assert_eq!(corner_mul(&c, &p, &b).unwrap(), b, "p_k b at k={k}");
                    assert_eq!(corner_mul(&c, &b, &p).unwrap(), b, "b p_k at k={k}");
                }
            }
        }
    }

    #[test]
    fn circles_multiply() {
        let c = ctx(2);
        let x1 = CornerElement::basis(0, (0, 1));
        let x2 = CornerElement::basis(0, (0, 2));
        assert_eq!(corner_mul(&c, &x1, &x1).unwrap(), x2);
    }

    #[test]
    fn rotation_times_adjoint_is_unit() {
        let c = ctx(2);
        let rho = CornerElement::basis(2, (2, 1));
        let prod = corner_mul(&c, &rho, &rho.star()).unwrap();
        assert_eq!(prod, CornerElement::unit(2));
    }

    #[test]
    fn products_reconstruct_in_raw_expansion() {
        // completeness of extraction: the extracted coordinates reproduce the
        // raw product exactly
        let c = ctx(2);
        for k in [1usize, 2] {
            let basis = corner_basis(k, k / 2, 1);
            for a in &basis {
                for b in &basis {
                    let fk = AnnElement::from_tl(&c.jones_wenzl(k));
                    let mut sa = AnnElement::zero(k, k);
                    for (&(m, n), cc) in a.terms() {
                        sa.add_term(AnnDiagram::corner_shape(k, m, n), cc.clone());
                    }
                    let mut sb = AnnElement::zero(k, k);
                    for (&(m, n), cc) in b.terms() {
                        sb.add_term(AnnDiagram::corner_shape(k, m, n), cc.clone());
                    }
                    let raw = fk
                        .compose(&c, &sa.compose(&c, &fk.compose(&c, &sb.compose(&c, &fk).unwrap()).unwrap()).unwrap())
                        .unwrap();
                    let prod = extract(k, &raw).unwrap();
                    let mut rebuilt = AnnElement::zero(k, k);
                    for (&label, cc) in prod.terms() {
                        let r = corner_raw(&c, &CornerElement::basis(k, label)).unwrap();
                        rebuilt = rebuilt.add(&r.scale(cc));
                    }
                    assert_eq!(rebuilt, raw, "raw reconstruction k={k}");
                }
            }
        }
    }

    #[test]
    fn commutativity_small() {
        for q in [1, 2] {
            let c = ctx(q);
            for k in 0..=2usize {
                let basis = corner_basis(k, 1, 2);
                for a in &basis {
                    for b in &basis {
                        assert_eq!(
                            corner_mul(&c, a, b).unwrap(),
                            corner_mul(&c, b, a).unwrap(),
                            "commutativity k={k} q={q}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn star_is_antimultiplicative() {
        let c = ctx(2);
        let basis = corner_basis(2, 1, 1);
        for a in &basis {
            for b in &basis {
                let lhs = corner_mul(&c, a, b).unwrap().star();
                let rhs = corner_mul(&c, &b.star(), &a.star()).unwrap();
                assert_eq!(lhs, rhs);
                assert_eq!(a.star().star(), *a);
            }
        }
    }

    #[test]
    fn grading_examples() {
        let c = ctx(2);
        // p_k is purely grade zero
        for k in 0..=3usize {
            let g = grade_decompose(&c, &CornerElement::unit(k)).unwrap();
            assert_eq!(g.len(), 1);
            assert_eq!(g[&0], CornerElement::unit(k));
        }
        // a single circle is purely grade one
        let x01 = CornerElement::basis(0, (0, 1));
        let g = grade_decompose(&c, &x01).unwrap();
        assert_eq!(g.len(), 1);
        assert_eq!(g[&1], x01);
        // two circles split into grades 0 and 2, mirroring 1x1 = 0 + 2
        let x02 = CornerElement::basis(0, (0, 2));
        let g = grade_decompose(&c, &x02).unwrap();
        let grades: Vec<usize> = g.keys().copied().collect();
        assert_eq!(grades, vec![0, 2]);
        let mut sum = CornerElement::zero(0);
        for comp in g.values() {
            sum = sum.add(comp);
        }
        assert_eq!(sum, x02, "components reassemble");
    }

    #[test]
    fn grades_reassemble() {
        for q in [1, 2] {
            let c = ctx(q);
            for k in 0..=2usize {
                for b in corner_basis(k, k / 2, 2) {
                    let g = grade_decompose(&c, &b).unwrap();
                    let mut sum = CornerElement::zero(k);
                    for comp in g.values() {
                        sum = sum.add(comp);
                    }
                    assert_eq!(sum, b, "grades of {:?} at q={q}", b.terms().next().unwrap().0);
                }
            }
        }
    }

    #[test]
    fn omega_values() {
        for q in [1i64, 2] {
            let c = ctx(q);
            for k in 0..=3usize {
                assert_eq!(omega(&c, &CornerElement::unit(k)).unwrap(), rat_int(1));
                assert_eq!(
                    omega_unnormalized(&c, &CornerElement::unit(k)).unwrap(),
                    c.param().qint(k as i64 + 1)
                );
            }
            // rho_1 has no grade-zero part
            assert_eq!(
                omega(&c, &CornerElement::basis(1, (1, 1))).unwrap(),
                rat_int(0)
            );
            // two circles close up to the scalar 1
            assert_eq!(
                omega(&c, &CornerElement::basis(0, (0, 2))).unwrap(),
                rat_int(1)
            );
        }
    }
}
