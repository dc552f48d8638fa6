//! Affine annular Temperley-Lieb diagrams in the universal-cover encoding.
//!
//! A diagram with `inner` points on the inner circle and `outer` points on
//! the outer circle lifts to a periodic non-crossing matching of two rows of
//! integers in an infinite strip; the deck transformation shifts the inner
//! row by `inner` and the outer row by `outer`. Storing the lifted partner of
//! each fundamental-domain point gives a canonical form for the annular
//! isotopy class. Noncontractible circles cannot be removed and are stored as
//! a count (only possible when no strand crosses the annulus). Contractible
//! circles are removed eagerly; composition reports how many it removed.
//!
//! Conventions fixed here and used everywhere downstream:
//! * angles increase counterclockwise with point `p` at `(p + 1/2) / count`
//!   turns, so the seam (angle zero) separates point `count - 1` from `0`;
//! * the rotation `rho_k` sends inner point `i` to outer point `i + 1`
//!   (one step counterclockwise, positive winding).

use crate::error::{Result, TubeError};
use crate::tl::TLDiagram;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Side {
    Inner,
    Outer,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct AnnDiagram {
    inner: usize,
    outer: usize,
    /// Lifted partner of inner point `i` for `i` in the fundamental domain.
    inner_partner: Vec<(Side, i64)>,
    outer_partner: Vec<(Side, i64)>,
    loops: usize,
}

impl AnnDiagram {
    pub fn new(
        inner: usize,
        outer: usize,
        inner_partner: Vec<(Side, i64)>,
        outer_partner: Vec<(Side, i64)>,
        loops: usize,
    ) -> Result<Self> {
        let d = AnnDiagram {
            inner,
            outer,
            inner_partner,
            outer_partner,
            loops,
        };
        d.validate()?;
        Ok(d)
    }

    fn unchecked(
        inner: usize,
        outer: usize,
        inner_partner: Vec<(Side, i64)>,
        outer_partner: Vec<(Side, i64)>,
        loops: usize,
    ) -> Self {
        let d = AnnDiagram {
            inner,
            outer,
            inner_partner,
            outer_partner,
            loops,
        };
        debug_assert!(d.validate().is_ok(), "invalid annular diagram: {d:?}");
        d
    }

    pub fn inner(&self) -> usize {
        self.inner
    }

    pub fn outer(&self) -> usize {
        self.outer
    }

    pub fn loops(&self) -> usize {
        self.loops
    }

    pub fn with_loops(&self, loops: usize) -> Self {
        let mut d = self.clone();
        d.loops = loops;
        debug_assert!(d.validate().is_ok());
        d
    }

    fn period(&self, side: Side) -> i64 {
        match side {
            Side::Inner => self.inner as i64,
            Side::Outer => self.outer as i64,
        }
    }

    /// Lifted partner of an arbitrary cover point.
    pub fn partner(&self, side: Side, p: i64) -> (Side, i64) {
        let per = self.period(side);
        let i = p.rem_euclid(per) as usize;
        let t = (p - i as i64) / per;
        let (s2, w) = match side {
            Side::Inner => self.inner_partner[i],
            Side::Outer => self.outer_partner[i],
        };
        (s2, w + t * self.period(s2))
    }

    pub fn inner_partner(&self, i: usize) -> (Side, i64) {
        self.inner_partner[i]
    }

    pub fn outer_partner(&self, o: usize) -> (Side, i64) {
        self.outer_partner[o]
    }

    /// Number of through strands (per period).
    pub fn rank(&self) -> usize {
        self.inner_partner
            .iter()
            .filter(|(s, _)| *s == Side::Outer)
            .count()
    }

    fn validate(&self) -> Result<()> {
        if (self.inner + self.outer) % 2 != 0 {
            return Err(TubeError::InvalidDiagram(
                "odd total boundary count".into(),
            ));
        }
        if self.inner_partner.len() != self.inner || self.outer_partner.len() != self.outer {
            return Err(TubeError::InvalidDiagram("partner table size".into()));
        }
        for i in 0..self.inner {
            let (s, w) = self.inner_partner[i];
            if s == Side::Inner && w == i as i64 {
                return Err(TubeError::InvalidDiagram("self-paired point".into()));
            }
            let back = self.partner(s, w);
            if back != (Side::Inner, i as i64) {
                return Err(TubeError::InvalidDiagram(format!(
                    "partner involution broken at inner {i}"
                )));
            }
        }
        for o in 0..self.outer {
            let (s, w) = self.outer_partner[o];
            if s == Side::Outer && w == o as i64 {
                return Err(TubeError::InvalidDiagram("self-paired point".into()));
            }
            let back = self.partner(s, w);
            if back != (Side::Outer, o as i64) {
                return Err(TubeError::InvalidDiagram(format!(
                    "partner involution broken at outer {o}"
                )));
            }
        }
        if self.loops > 0 && self.rank() > 0 {
            return Err(TubeError::InvalidDiagram(
                "noncontractible loops next to through strands".into(),
            ));
        }
        if !self.is_planar_cover() {
            return Err(TubeError::InvalidDiagram(format!(
                "crossing strands in cover: {:?} / {:?}",
                self.inner_partner, self.outer_partner
            )));
        }
        Ok(())
    }

    /// Non-crossing check on a window of the universal cover. Positions get
    /// the common scale `x(inner p) = (2p+1) outer`, `x(outer p) = (2p+1)
    /// inner` with period `2 inner outer`.
    fn is_planar_cover(&self) -> bool {
        let si = self.outer.max(1) as i64;
        let so = self.inner.max(1) as i64;
        let xi = |p: i64| (2 * p + 1) * si;
        let xo = |p: i64| (2 * p + 1) * so;
        let mut bot_arcs: Vec<(i64, i64)> = Vec::new();
        let mut top_arcs: Vec<(i64, i64)> = Vec::new();
        let mut through: Vec<(i64, i64)> = Vec::new();
        for t in -2..=2i64 {
            for i in 0..self.inner {
                let p = i as i64 + t * self.inner as i64;
                let (s, w) = self.partner(Side::Inner, p);
                match s {
                    Side::Inner => {
                        if xi(p) < xi(w) {
                            bot_arcs.push((xi(p), xi(w)));
                        }
                    }
                    Side::Outer => through.push((xi(p), xo(w))),
                }
            }
            for o in 0..self.outer {
                let p = o as i64 + t * self.outer as i64;
                let (s, w) = self.partner(Side::Outer, p);
                if s == Side::Outer && xo(p) < xo(w) {
                    top_arcs.push((xo(p), xo(w)));
                }
            }
        }
        let nested_or_disjoint = |arcs: &[(i64, i64)]| -> bool {
            for (i, &(a1, b1)) in arcs.iter().enumerate() {
                for &(a2, b2) in &arcs[i + 1..] {
                    if a1 == a2 && b1 == b2 {
                        continue;
                    }
                    let in1 = a1 < a2 && a2 < b1;
                    let in2 = a1 < b2 && b2 < b1;
                    if in1 != in2 {
                        return false;
                    }
                }
            }
            true
        };
        if !nested_or_disjoint(&bot_arcs) || !nested_or_disjoint(&top_arcs) {
            return false;
        }
        // through chords must be order preserving
        for (i, &(b1, t1)) in through.iter().enumerate() {
            for &(b2, t2) in &through[i + 1..] {
                if b1 == b2 {
                    return false;
                }
                if (b1 < b2) != (t1 < t2) {
                    return false;
                }
            }
        }
        // arcs may not trap a through endpoint
        for &(a, b) in &bot_arcs {
            for &(tb, _) in &through {
                if a < tb && tb < b {
                    return false;
                }
            }
        }
        for &(a, b) in &top_arcs {
            for &(_, tt) in &through {
                if a < tt && tt < b {
                    return false;
                }
            }
        }
        true
    }

    /// Embeds a rectangular diagram: bottom edge to the inner circle, top
    /// edge to the outer circle, all strands within one fundamental domain.
    pub fn from_tl(d: &TLDiagram) -> Self {
        let b = d.bottom();
        let t = d.top();
        let conv = |p: usize| -> (Side, i64) {
            if p < b {
                (Side::Inner, p as i64)
            } else {
                (Side::Outer, (p - b) as i64)
            }
        };
        let inner_partner = (0..b).map(|i| conv(d.partner(i))).collect();
        let outer_partner = (0..t).map(|o| conv(d.partner(b + o))).collect();
        AnnDiagram::unchecked(b, t, inner_partner, outer_partner, 0)
    }

    /// The rotation power `rho_k^offset`: inner `i` joins outer `i + offset`.
    pub fn rho(k: usize, offset: i64) -> Self {
        assert!(k > 0);
        let inner_partner = (0..k).map(|i| (Side::Outer, i as i64 + offset)).collect();
        let outer_partner = (0..k).map(|o| (Side::Inner, o as i64 - offset)).collect();
        AnnDiagram::unchecked(k, k, inner_partner, outer_partner, 0)
    }

    /// The empty annulus with `j` noncontractible circles.
    pub fn circles(j: usize) -> Self {
        AnnDiagram::unchecked(0, 0, Vec::new(), Vec::new(), j)
    }

    /// The hatted corner basis shape: `rank` through strands winding `wind`
    /// steps, with the spare boundary points capped in nested position
    /// through the seam ("around the bottom of the annulus"). For
    /// `rank == 0` the second index counts noncontractible circles instead.
    pub fn corner_shape(k: usize, rank: usize, wind: i64) -> Self {
        assert!(rank <= k && (k - rank) % 2 == 0);
        if rank == 0 {
            assert!(wind >= 0, "loop count must be nonnegative");
            let half = AnnDiagram::seam_caps(k);
            return AnnDiagram::unchecked(k, k, half.clone(), half, wind as usize);
        }
        let c = (k - rank) as i64 / 2;
        let mut inner_partner = AnnDiagram::seam_caps(k);
        let mut outer_partner = AnnDiagram::seam_caps(k);
        for a in 0..rank as i64 {
            let slot = a + wind;
            let sm = slot.rem_euclid(rank as i64);
            let t = (slot - sm) / rank as i64;
            inner_partner[(c + a) as usize] = (Side::Outer, c + sm + t * k as i64);
            let back = a - wind;
            let bm = back.rem_euclid(rank as i64);
            let tb = (back - bm) / rank as i64;
            outer_partner[(c + a) as usize] = (Side::Inner, c + bm + tb * k as i64);
        }
        AnnDiagram::unchecked(k, k, inner_partner, outer_partner, 0)
    }

    /// Nested seam caps on the first `(k - rank)/2` positions plus their
    /// mirror partners; remaining entries are placeholders to be overwritten.
    fn seam_caps(k: usize) -> Vec<(Side, i64)> {
        let mut v = vec![(Side::Inner, 0); k];
        let c = k / 2;
        for j in 0..c {
            v[j] = (Side::Inner, -(j as i64 + 1));
            v[k - 1 - j] = (Side::Inner, (j + k) as i64);
        }
        v
    }

    /// The level reducer from `k` inner points to `l` outer points: nested
    /// seam caps on the `(k-l)/2` trailing pairs, straight through strands in
    /// the middle.
    pub fn reducer(k: usize, l: usize) -> Self {
        assert!(l <= k && (k - l) % 2 == 0);
        let c = (k - l) / 2;
        let mut inner_partner = vec![(Side::Inner, 0); k];
        for j in 0..c {
            inner_partner[j] = (Side::Inner, -(j as i64 + 1));
            inner_partner[k - 1 - j] = (Side::Inner, (j + k) as i64);
        }
        for a in 0..l {
            inner_partner[c + a] = (Side::Outer, a as i64);
        }
        let outer_partner = (0..l).map(|a| (Side::Inner, (c + a) as i64)).collect();
        AnnDiagram::unchecked(k, l, inner_partner, outer_partner, 0)
    }

    /// The inclusion of level `m` into level `k` (the reducer reflected).
    pub fn inclusion(m: usize, k: usize) -> Self {
        AnnDiagram::reducer(k, m).star()
    }

    /// The adjoint diagram: exchanges the two boundary circles.
    pub fn star(&self) -> Self {
        let swap = |(s, w): &(Side, i64)| -> (Side, i64) {
            let s2 = match s {
                Side::Inner => Side::Outer,
                Side::Outer => Side::Inner,
            };
            (s2, *w)
        };
        AnnDiagram::unchecked(
            self.outer,
            self.inner,
            self.outer_partner.iter().map(swap).collect(),
            self.inner_partner.iter().map(swap).collect(),
            self.loops,
        )
    }

    /// Stacks `self` outside `y` (gluing `y`'s outer circle to `self`'s inner
    /// circle) and removes contractible circles, returning their count as a
    /// power of `delta`.
    pub fn compose(&self, y: &AnnDiagram) -> Result<(AnnDiagram, usize)> {
        if y.outer != self.inner {
            return Err(TubeError::BoundaryMismatch(format!(
                "annular compose ({},{}) outside ({},{})",
                self.inner, self.outer, y.inner, y.outer
            )));
        }
        let m = self.inner;
        let l = y.inner;
        let n = self.outer;
        let mut mid_seen = vec![false; m];
        // Walk from a boundary cover point to the far end of its strand.
        let walk_from_inner = |start: i64, mid_seen: &mut Vec<bool>| -> (Side, i64) {
            let (s, mut z) = y.partner(Side::Inner, start);
            if s == Side::Inner {
                return (Side::Inner, z);
            }
            loop {
                if m > 0 {
                    mid_seen[z.rem_euclid(m as i64) as usize] = true;
                }
                let (sx, w) = self.partner(Side::Inner, z);
                if sx == Side::Outer {
                    return (Side::Outer, w);
                }
                if m > 0 {
                    mid_seen[w.rem_euclid(m as i64) as usize] = true;
                }
                let (sy, w2) = y.partner(Side::Outer, w);
                if sy == Side::Inner {
                    return (Side::Inner, w2);
                }
                z = w2;
            }
        };
        let walk_from_outer = |start: i64, mid_seen: &mut Vec<bool>| -> (Side, i64) {
            let (s, mut z) = self.partner(Side::Outer, start);
            if s == Side::Outer {
                return (Side::Outer, z);
            }
            loop {
                if m > 0 {
                    mid_seen[z.rem_euclid(m as i64) as usize] = true;
                }
                let (sy, w) = y.partner(Side::Outer, z);
                if sy == Side::Inner {
                    return (Side::Inner, w);
                }
                if m > 0 {
                    mid_seen[w.rem_euclid(m as i64) as usize] = true;
                }
                let (sx, w2) = self.partner(Side::Inner, w);
                if sx == Side::Outer {
                    return (Side::Outer, w2);
                }
                z = w2;
            }
        };
        let inner_partner: Vec<(Side, i64)> = (0..l)
            .map(|i| walk_from_inner(i as i64, &mut mid_seen))
            .collect();
        let outer_partner: Vec<(Side, i64)> = (0..n)
            .map(|o| walk_from_outer(o as i64, &mut mid_seen))
            .collect();
        // Remaining middle points lie on closed circles.
        let mut contractible = 0usize;
        let mut noncontractible = 0usize;
        for z0 in 0..m {
            if mid_seen[z0] {
                continue;
            }
            let mut z = z0 as i64;
            loop {
                mid_seen[z.rem_euclid(m as i64) as usize] = true;
                let (sx, w) = self.partner(Side::Inner, z);
                debug_assert_eq!(sx, Side::Inner, "circle escaped through the outer boundary");
                mid_seen[w.rem_euclid(m as i64) as usize] = true;
                let (sy, w2) = y.partner(Side::Outer, w);
                debug_assert_eq!(sy, Side::Inner, "circle escaped through the inner boundary");
                if w2.rem_euclid(m as i64) == z0 as i64 {
                    let shift = (w2 - z0 as i64) / m as i64;
                    if shift == 0 {
                        contractible += 1;
                    } else {
                        debug_assert!(shift.abs() == 1, "embedded circle winding {shift}");
                        noncontractible += 1;
                    }
                    break;
                }
                z = w2;
            }
        }
        let loops = self.loops + y.loops + noncontractible;
        let out = AnnDiagram::unchecked(l, n, inner_partner, outer_partner, loops);
        Ok((out, contractible))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rho_inverse() {
        for k in 1..=4usize {
            let r = AnnDiagram::rho(k, 1);
            let rinv = AnnDiagram::rho(k, -1);
            let (id, loops) = r.compose(&rinv).unwrap();
            assert_eq!(loops, 0);
            assert_eq!(id, AnnDiagram::rho(k, 0));
            let (id2, _) = rinv.compose(&r).unwrap();
            assert_eq!(id2, AnnDiagram::rho(k, 0));
            assert_eq!(r.star(), rinv, "rho* = rho^-1");
        }
    }

    #[test]
    fn rho_powers_accumulate() {
        let r = AnnDiagram::rho(3, 1);
        let (r2, _) = r.compose(&r).unwrap();
        assert_eq!(r2, AnnDiagram::rho(3, 2));
        let (r5, _) = AnnDiagram::rho(3, 3).compose(&r2).unwrap();
        assert_eq!(r5, AnnDiagram::rho(3, 5));
    }

    #[test]
    fn circles_stack() {
        let one = AnnDiagram::circles(1);
        let (two, d) = one.compose(&one).unwrap();
        assert_eq!(d, 0);
        assert_eq!(two, AnnDiagram::circles(2));
    }

    #[test]
    fn cap_cup_homotopy_cases() {
        // (2,0) all-cap outside (0,2) all-cup: a single circle whose class
        // depends on which side of the inner disk each arc passes.
        let cap_direct = AnnDiagram::new(
            2,
            0,
            vec![(Side::Inner, 1), (Side::Inner, 0)],
            vec![],
            0,
        )
        .unwrap();
        let cap_seam = AnnDiagram::new(
            2,
            0,
            vec![(Side::Inner, -1), (Side::Inner, 2)],
            vec![],
            0,
        )
        .unwrap();
        let cup_direct = cap_direct.star();
        let cup_seam = cap_seam.star();
        let empty = AnnDiagram::circles(0);

        let (d, c) = cap_direct.compose(&cup_direct).unwrap();
        assert_eq!((d.clone(), c), (empty.clone(), 1), "direct/direct closes a contractible circle");
        let (d, c) = cap_seam.compose(&cup_seam).unwrap();
        assert_eq!((d.clone(), c), (empty, 1), "seam/seam also contracts");
        let (d, c) = cap_direct.compose(&cup_seam).unwrap();
        assert_eq!(c, 0);
        assert_eq!(d, AnnDiagram::circles(1), "mixed classes wind once");
        let (d, c) = cap_seam.compose(&cup_direct).unwrap();
        assert_eq!(c, 0);
        assert_eq!(d, AnnDiagram::circles(1));
    }

    #[test]
    fn embed_matches_rect_composition() {
        use crate::tl::enumerate_diagrams;
        // Annular composition of embedded rectangles agrees with rectangle
        // composition (an independent oracle for the strand walker).
        for d1 in enumerate_diagrams(2, 4) {
            for d2 in enumerate_diagrams(4, 2) {
                let (rect, rect_loops) = d1.compose(&d2).unwrap();
                let (ann, ann_loops) = AnnDiagram::from_tl(&d2)
                    .compose(&AnnDiagram::from_tl(&d1))
                    .unwrap();
                assert_eq!(ann, AnnDiagram::from_tl(&rect));
                assert_eq!(ann_loops, rect_loops);
            }
        }
    }

    #[test]
    fn corner_shapes_are_valid() {
        for k in 0..=6usize {
            for rank in (k % 2..=k).step_by(2) {
                let winds: Vec<i64> = if rank == 0 { vec![0, 1, 2] } else { vec![-3, -1, 0, 1, 2, 3] };
                for w in winds {
                    let d = AnnDiagram::corner_shape(k, rank, w);
                    assert_eq!(d.rank(), rank);
                    assert_eq!(d.star(), AnnDiagram::corner_shape(k, rank, if rank == 0 { w } else { -w }));
                }
            }
        }
        assert_eq!(
            AnnDiagram::corner_shape(2, 2, 1),
            AnnDiagram::rho(2, 1),
            "full-rank shape with winding one is the rotation"
        );
    }

    #[test]
    fn reducer_and_inclusion() {
        for (k, l) in [(2, 0), (3, 1), (4, 2), (5, 1), (6, 0)] {
            let r = AnnDiagram::reducer(k, l);
            assert_eq!(r.rank(), l);
            assert_eq!(r.inner(), k);
            assert_eq!(r.outer(), l);
            let i = AnnDiagram::inclusion(l, k);
            assert_eq!(i.inner(), l);
            assert_eq!(i.outer(), k);
            // reducing the inclusion closes the (k-l)/2 seam caps into
            // contractible circles and leaves the identity of level l
            let (d, c) = r.compose(&i).unwrap();
            assert_eq!(c, (k - l) / 2);
            if l > 0 {
                assert_eq!(d, AnnDiagram::rho(l, 0));
            } else {
                assert_eq!(d, AnnDiagram::circles(0));
            }
        }
        // the other order keeps the caps apart: the hatted basis shape
        let r = AnnDiagram::reducer(4, 2);
        let i = AnnDiagram::inclusion(2, 4);
        let (d, c) = i.compose(&r).unwrap();
        assert_eq!(c, 0, "caps stay open");
        assert_eq!(d, AnnDiagram::corner_shape(4, 2, 0));
    }

    #[test]
    fn reducer_inclusion_contract_circles() {
        // reducer(k,0) after inclusion(0,k) closes k/2 contractible circles
        for k in [2usize, 4, 6] {
            let (d, c) = AnnDiagram::reducer(k, 0)
                .compose(&AnnDiagram::inclusion(0, k))
                .unwrap();
            assert_eq!(d, AnnDiagram::circles(0));
            assert_eq!(c, k / 2);
        }
    }

    #[test]
    fn composition_associative_on_samples() {
        let diagrams2: Vec<AnnDiagram> = vec![
            AnnDiagram::rho(2, 0),
            AnnDiagram::rho(2, 1),
            AnnDiagram::rho(2, -2),
            AnnDiagram::corner_shape(2, 0, 0),
            AnnDiagram::corner_shape(2, 0, 1),
            AnnDiagram::corner_shape(2, 2, 3),
        ];
        for a in &diagrams2 {
            for b in &diagrams2 {
                for c in &diagrams2 {
                    let (ab, l1) = a.compose(b).unwrap();
                    let (ab_c, l2) = ab.compose(c).unwrap();
                    let (bc, l3) = b.compose(c).unwrap();
                    let (a_bc, l4) = a.compose(&bc).unwrap();
                    assert_eq!(ab_c, a_bc);
                    assert_eq!(l1 + l2, l3 + l4, "delta powers associate");
                }
            }
        }
    }
}
