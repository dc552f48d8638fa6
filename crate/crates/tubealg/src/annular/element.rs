//! Linear combinations of annular diagrams.

use std::collections::BTreeMap;

use crate::error::Result;
use crate::scalar::{ParamKind, Rat, Scalar};
use crate::tl::{TLElement, TlContext};

use super::diagram::AnnDiagram;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AnnElement {
    inner: usize,
    outer: usize,
    terms: BTreeMap<AnnDiagram, Scalar>,
}

impl AnnElement {
    pub fn zero(inner: usize, outer: usize) -> Self {
        AnnElement {
            inner,
            outer,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_diagram(d: AnnDiagram) -> Self {
        let (i, o) = (d.inner(), d.outer());
        let mut terms = BTreeMap::new();
        terms.insert(d, Scalar::one(ParamKind::Circle));
        AnnElement {
            inner: i,
            outer: o,
            terms,
        }
    }

    /// Embeds a rectangular element into the annulus.
    pub fn from_tl(x: &TLElement) -> Self {
        let mut out = AnnElement::zero(x.bottom(), x.top());
        for (d, c) in x.terms() {
            out.add_term(AnnDiagram::from_tl(d), c.clone());
        }
        out
    }

    pub fn inner(&self) -> usize {
        self.inner
    }

    pub fn outer(&self) -> usize {
        self.outer
    }

    pub fn terms(&self) -> impl Iterator<Item = (&AnnDiagram, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff_of(&self, d: &AnnDiagram) -> Scalar {
        self.terms
            .get(d)
            .cloned()
            .unwrap_or_else(|| Scalar::zero(ParamKind::Circle))
    }

    pub fn add_term(&mut self, d: AnnDiagram, c: Scalar) {
        debug_assert_eq!((d.inner(), d.outer()), (self.inner, self.outer));
        if c.is_zero() {
            return;
        }
        match self.terms.entry(d) {
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

    pub fn add(&self, other: &AnnElement) -> AnnElement {
        let mut out = self.clone();
        for (d, c) in &other.terms {
            out.add_term(d.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> AnnElement {
        let mut out = AnnElement::zero(self.inner, self.outer);
        for (d, v) in &self.terms {
            out.add_term(d.clone(), v * c);
        }
        out
    }

    pub fn scale_rat(&self, c: &Rat) -> AnnElement {
        self.scale(&Scalar::constant(ParamKind::Circle, c.clone()))
    }

    /// `self` stacked outside `y`; contractible circles become `delta` factors.
    pub fn compose(&self, ctx: &TlContext, y: &AnnElement) -> Result<AnnElement> {
        let mut out = AnnElement::zero(y.inner, self.outer);
        for (d1, c1) in &self.terms {
            for (d2, c2) in &y.terms {
                let (d, circles) = d1.compose(d2)?;
                out.add_term(d, (c1 * c2).scale(&ctx.delta_pow(circles)));
            }
        }
        Ok(out)
    }

    /// The `#` involution: boundary swap with coefficient involution.
    pub fn star(&self) -> AnnElement {
        let mut out = AnnElement::zero(self.outer, self.inner);
        for (d, c) in &self.terms {
            out.add_term(d.star(), c.involute());
        }
        out
    }
}
