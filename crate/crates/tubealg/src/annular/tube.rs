//! Tube (seam-cut) presentation of annular diagrams.
//!
//! Cutting the annulus along the radial seam at angle zero turns a diagram
//! into a rectangle whose side strings record the seam crossings. We use the
//! paper-style flattening: side strings enter at the bottom left and exit at
//! the top right, ordered by their radial position on the seam.
//!
//! Rectangle position semantics for a `TubeRect { side: s, rect }` with
//! `rect` in `TL(s + inner, outer + s)`:
//! * bottom `p < s`: seam-left crossing at radial slot `s - 1 - p`
//!   (slot `0` is nearest the inner circle);
//! * bottom `p >= s`: inner point `p - s`;
//! * top `p < outer`: outer point `p`;
//! * top `p >= outer`: seam-right crossing at radial slot `outer + s - 1 - p`.
//!
//! Gluing identifies seam-right slot `r` with seam-left slot `r` of the next
//! fundamental domain.

use num::traits::ToPrimitive;

use crate::error::{Result, TubeError};
use crate::scalar::{rat, Rat};
use crate::tl::TLDiagram;

use super::diagram::{AnnDiagram, Side};

#[derive(Clone, Debug)]
pub struct TubeRect {
    pub side: usize,
    pub inner: usize,
    pub outer: usize,
    pub rect: TLDiagram,
}

impl TubeRect {
    pub fn new(side: usize, inner: usize, outer: usize, rect: TLDiagram) -> Result<Self> {
        if rect.bottom() != side + inner || rect.top() != outer + side {
            return Err(TubeError::BoundaryMismatch(format!(
                "tube rect must be ({}, {}), got ({}, {})",
                side + inner,
                outer + side,
                rect.bottom(),
                rect.top()
            )));
        }
        Ok(TubeRect {
            side,
            inner,
            outer,
            rect,
        })
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum RectPos {
    Inner(usize),
    Outer(usize),
    SeamLeft(usize),
    SeamRight(usize),
}

/// Reassembles the annular diagram presented by a tube rectangle. Seam
/// circles with zero winding are contractible and counted as `delta` powers;
/// winding-one circles are noncontractible.
pub fn tube_to_cover(t: &TubeRect) -> Result<(AnnDiagram, usize)> {
    let s = t.side;
    let (inner, outer) = (t.inner, t.outer);
    let b = s + inner;
    let classify = |p: usize| -> RectPos {
        if p < s {
            RectPos::SeamLeft(s - 1 - p)
        } else if p < b {
            RectPos::Inner(p - s)
        } else if p < b + outer {
            RectPos::Outer(p - b)
        } else {
            RectPos::SeamRight(b + outer + s - 1 - p)
        }
    };
    let global = |pos: RectPos| -> usize {
        match pos {
            RectPos::SeamLeft(r) => s - 1 - r,
            RectPos::Inner(i) => s + i,
            RectPos::Outer(o) => b + o,
            RectPos::SeamRight(r) => b + outer + s - 1 - r,
        }
    };
    let mut seam_seen = vec![false; s];
    let mut walk = |start: usize, seam_seen: &mut Vec<bool>| -> (Side, i64) {
        let mut domain: i64 = 0;
        let mut g = start;
        loop {
            let q = t.rect.partner(g);
            match classify(q) {
                RectPos::Inner(i) => return (Side::Inner, i as i64 + domain * inner as i64),
                RectPos::Outer(o) => return (Side::Outer, o as i64 + domain * outer as i64),
                RectPos::SeamRight(r) => {
                    seam_seen[r] = true;
                    domain += 1;
                    g = global(RectPos::SeamLeft(r));
                }
                RectPos::SeamLeft(r) => {
                    seam_seen[r] = true;
                    domain -= 1;
                    g = global(RectPos::SeamRight(r));
                }
            }
        }
    };
    let inner_partner: Vec<(Side, i64)> = (0..inner)
        .map(|i| walk(global(RectPos::Inner(i)), &mut seam_seen))
        .collect();
    let outer_partner: Vec<(Side, i64)> = (0..outer)
        .map(|o| walk(global(RectPos::Outer(o)), &mut seam_seen))
        .collect();
    // Circles made entirely of seam segments.
    let mut contractible = 0usize;
    let mut loops = 0usize;
    for r0 in 0..s {
        if seam_seen[r0] {
            continue;
        }
        let mut winding: i64 = 0;
        let mut enter = RectPos::SeamLeft(r0);
        loop {
            match enter {
                RectPos::SeamLeft(r) | RectPos::SeamRight(r) => seam_seen[r] = true,
                _ => unreachable!(),
            }
            let q = t.rect.partner(global(enter));
            enter = match classify(q) {
                RectPos::SeamRight(r) => {
                    seam_seen[r] = true;
                    winding += 1;
                    RectPos::SeamLeft(r)
                }
                RectPos::SeamLeft(r) => {
                    seam_seen[r] = true;
                    winding -= 1;
                    RectPos::SeamRight(r)
                }
                _ => {
                    return Err(TubeError::InvalidDiagram(
                        "seam circle reached the boundary".into(),
                    ))
                }
            };
            if enter == RectPos::SeamLeft(r0) {
                break;
            }
        }
        match winding {
            0 => contractible += 1,
            1 | -1 => loops += 1,
            w => {
                return Err(TubeError::InvalidDiagram(format!(
                    "seam circle with winding {w}"
                )))
            }
        }
    }
    let d = AnnDiagram::new(inner, outer, inner_partner, outer_partner, loops)?;
    Ok((d, contractible))
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Event {
    Cap(usize),
    Cup(usize),
    Loop(usize),
    Crossing { strand: usize, at: i64 },
}

/// The minimal tube rectangle of the hatted corner shape
/// [`AnnDiagram::corner_shape`]. The radial order on the seam is: nested caps
/// from the inside out, then the winding bundle (or the noncontractible
/// circles), then nested cups from the outside in; bundle crossings are
/// ordered by exact linear interpolation between endpoint angles.
pub fn shape_tube(k: usize, rank: usize, wind: i64) -> TubeRect {
    assert!(rank <= k && (k - rank) % 2 == 0);
    let c = (k - rank) / 2;
    let mut events: Vec<((u8, Rat), Event)> = Vec::new();
    for j in 0..c {
        events.push(((0, rat(j as i64, 1)), Event::Cap(j)));
        events.push(((2, rat((c - 1 - j) as i64, 1)), Event::Cup(j)));
    }
    // Per-strand traversal data for the through bundle.
    struct Strand {
        ends: (usize, usize), // (inner point, outer point)
        rightward: bool,
        crossings: Vec<i64>,
    }
    let mut strands: Vec<Strand> = Vec::new();
    if rank == 0 {
        assert!(wind >= 0);
        for l in 0..wind as usize {
            events.push(((1, rat(l as i64, 1)), Event::Loop(l)));
        }
    } else {
        for a in 0..rank {
            let slot = a as i64 + wind;
            let sm = slot.rem_euclid(rank as i64);
            let t = (slot - sm) / rank as i64;
            let xb = rat(2 * (c + a) as i64 + 1, 2 * k as i64);
            let xt = &rat(2 * (c as i64 + sm) + 1, 2 * k as i64) + &rat(t, 1);
            let rightward = xt > xb;
            let (lo, hi) = if rightward {
                (xb.clone(), xt.clone())
            } else {
                (xt.clone(), xb.clone())
            };
            let mut ws: Vec<i64> = Vec::new();
            let mut w_i = lo.ceil().to_integer().to_i64().expect("small integer");
            if rat(w_i, 1) == lo {
                w_i += 1;
            }
            while rat(w_i, 1) < hi {
                ws.push(w_i);
                w_i += 1;
            }
            let span = &xt - &xb;
            for &wv in &ws {
                let r = (&rat(wv, 1) - &xb) / span.clone();
                events.push(((1, r), Event::Crossing { strand: a, at: wv }));
            }
            let traversal = if rightward {
                ws.clone()
            } else {
                let mut v = ws.clone();
                v.reverse();
                v
            };
            strands.push(Strand {
                ends: (c + a, (c as i64 + sm) as usize),
                rightward,
                crossings: traversal,
            });
        }
    }
    events.sort_by(|a, b| a.0.cmp(&b.0));
    for w in events.windows(2) {
        assert!(w[0].0 != w[1].0, "ambiguous radial order in shape tube");
    }
    let s = events.len();
    let radial = |ev: Event| -> usize {
        events
            .iter()
            .position(|(_, e)| *e == ev)
            .expect("event registered")
    };
    let b = s + k;
    let seam_left = |r: usize| s - 1 - r;
    let seam_right = |r: usize| b + k + s - 1 - r;
    let inner_pt = |i: usize| s + i;
    let outer_pt = |o: usize| b + o;
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for j in 0..c {
        let rc = radial(Event::Cap(j));
        pairs.push((inner_pt(j), seam_left(rc)));
        pairs.push((seam_right(rc), inner_pt(k - 1 - j)));
        let ru = radial(Event::Cup(j));
        pairs.push((outer_pt(j), seam_left(ru)));
        pairs.push((seam_right(ru), outer_pt(k - 1 - j)));
    }
    if rank == 0 {
        for l in 0..wind.max(0) as usize {
            let r = radial(Event::Loop(l));
            pairs.push((seam_left(r), seam_right(r)));
        }
    }
    for (a, st) in strands.iter().enumerate() {
        if st.crossings.is_empty() {
            pairs.push((inner_pt(st.ends.0), outer_pt(st.ends.1)));
            continue;
        }
        let rs: Vec<usize> = st
            .crossings
            .iter()
            .map(|&w| radial(Event::Crossing { strand: a, at: w }))
            .collect();
        if st.rightward {
            pairs.push((inner_pt(st.ends.0), seam_right(rs[0])));
            for i in 1..rs.len() {
                pairs.push((seam_left(rs[i - 1]), seam_right(rs[i])));
            }
            pairs.push((seam_left(rs[rs.len() - 1]), outer_pt(st.ends.1)));
        } else {
            pairs.push((inner_pt(st.ends.0), seam_left(rs[0])));
            for i in 1..rs.len() {
                pairs.push((seam_right(rs[i - 1]), seam_left(rs[i])));
            }
            pairs.push((seam_right(rs[rs.len() - 1]), outer_pt(st.ends.1)));
        }
    }
    let rect = TLDiagram::new(b, k + s, &pairs)
        .expect("shape tube rectangle is planar by construction");
    TubeRect {
        side: s,
        inner: k,
        outer: k,
        rect,
    }
}
