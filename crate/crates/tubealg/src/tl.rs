//! Rectangular Temperley-Lieb diagrams and their linear combinations at loop
//! parameter `delta = q + 1/q`: composition, tensor, the trace, Jones-Wenzl
//! projectors and isotypic projectors onto their summands.

use std::collections::{BTreeMap, HashMap};
use std::sync::RwLock;

use num::traits::{One, Zero};

use crate::error::{Result, TubeError};
use crate::scalar::{rat_int, ParamKind, QParam, Rat, Scalar};

/// A planar pairing of `bottom + top` boundary points of a rectangle.
///
/// Points `0..bottom` run left to right on the bottom edge, points
/// `bottom..bottom+top` left to right on the top edge. Closed loops are never
/// stored; composition removes them and reports their count.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct TLDiagram {
    bottom: usize,
    top: usize,
    pairing: Vec<usize>,
}

impl TLDiagram {
    pub fn new(bottom: usize, top: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let n = bottom + top;
        if n % 2 != 0 || pairs.len() * 2 != n {
            return Err(TubeError::InvalidDiagram(format!(
                "a ({bottom},{top}) diagram needs {} pairs",
                n / 2
            )));
        }
        let mut pairing = vec![usize::MAX; n];
        for &(a, b) in pairs {
            if a >= n || b >= n || a == b || pairing[a] != usize::MAX || pairing[b] != usize::MAX {
                return Err(TubeError::InvalidDiagram(format!(
                    "bad pair ({a},{b}) in a ({bottom},{top}) diagram"
                )));
            }
            pairing[a] = b;
            pairing[b] = a;
        }
        let d = TLDiagram {
            bottom,
            top,
            pairing,
        };
        if !d.is_planar() {
            return Err(TubeError::InvalidDiagram(format!(
                "crossing pairs {pairs:?} in a ({bottom},{top}) diagram"
            )));
        }
        Ok(d)
    }

    fn from_pairing(bottom: usize, top: usize, pairing: Vec<usize>) -> Self {
        let d = TLDiagram {
            bottom,
            top,
            pairing,
        };
        debug_assert!(d.is_planar(), "non-planar pairing constructed internally");
        d
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn partner(&self, p: usize) -> usize {
        self.pairing[p]
    }

    pub fn pairing(&self) -> &[usize] {
        &self.pairing
    }

    /// Position of a point in the boundary cycle (bottom left-to-right, then
    /// top right-to-left).
    fn cycle_pos(&self, p: usize) -> usize {
        if p < self.bottom {
            p
        } else {
            self.bottom + (self.bottom + self.top - 1 - p)
        }
    }

    fn is_planar(&self) -> bool {
        let n = self.bottom + self.top;
        let mut chords = Vec::with_capacity(n / 2);
        for p in 0..n {
            let q = self.pairing[p];
            if q >= n || self.pairing[q] != p || q == p {
                return false;
            }
            if p < q {
                let (a, b) = (self.cycle_pos(p), self.cycle_pos(q));
                chords.push((a.min(b), a.max(b)));
            }
        }
        for i in 0..chords.len() {
            for j in i + 1..chords.len() {
                let (a1, b1) = chords[i];
                let (a2, b2) = chords[j];
                let inside1 = a1 < a2 && a2 < b1;
                let inside2 = a1 < b2 && b2 < b1;
                if inside1 != inside2 {
                    return false;
                }
            }
        }
        true
    }

    pub fn identity(n: usize) -> Self {
        let pairing = (0..2 * n).map(|p| (p + n) % (2 * n)).collect();
        TLDiagram::from_pairing(n, n, pairing)
    }

    /// The Temperley-Lieb generator `e_i` on `n` strands, `0 <= i <= n-2`:
    /// cap at bottom positions `(i, i+1)`, cup at the same top positions.
    pub fn e_gen(n: usize, i: usize) -> Self {
        assert!(i + 1 < n);
        let mut pairing = vec![0; 2 * n];
        for p in 0..n {
            let q = if p == i {
                i + 1
            } else if p == i + 1 {
                i
            } else {
                p + n
            };
            pairing[p] = q;
            pairing[q] = p;
        }
        pairing[n + i] = n + i + 1;
        pairing[n + i + 1] = n + i;
        TLDiagram::from_pairing(n, n, pairing)
    }

    /// Cap at bottom position `i`: the `(n, n-2)` diagram pairing bottom
    /// points `i, i+1` with through strands elsewhere.
    pub fn cap_at(n: usize, i: usize) -> Self {
        assert!(i + 1 < n);
        let mut pairing = vec![0; 2 * n - 2];
        pairing[i] = i + 1;
        pairing[i + 1] = i;
        for p in 0..n {
            if p == i || p == i + 1 {
                continue;
            }
            let t = n + if p < i { p } else { p - 2 };
            pairing[p] = t;
            pairing[t] = p;
        }
        TLDiagram::from_pairing(n, n - 2, pairing)
    }

    /// Cup at top position `i`: the `(n-2, n)` diagram pairing top points
    /// `i, i+1`.
    pub fn cup_at(n: usize, i: usize) -> Self {
        TLDiagram::cap_at(n, i).flip()
    }

    /// `a` nested cups: the `(0, 2a)` diagram pairing top `j` with `2a-1-j`.
    pub fn cups_nested(a: usize) -> Self {
        let pairing = (0..2 * a).map(|p| 2 * a - 1 - p).collect();
        TLDiagram::from_pairing(0, 2 * a, pairing)
    }

    pub fn caps_nested(a: usize) -> Self {
        TLDiagram::cups_nested(a).flip()
    }

    /// Vertical reflection: swaps the roles of bottom and top.
    pub fn flip(&self) -> Self {
        let (b, t) = (self.bottom, self.top);
        let map = |p: usize| if p < b { p + t } else { p - b };
        let mut pairing = vec![0; b + t];
        for p in 0..b + t {
            pairing[map(p)] = map(self.pairing[p]);
        }
        TLDiagram::from_pairing(t, b, pairing)
    }

    /// Stacks `self` under `other` (middle counts must agree) and returns the
    /// resulting diagram together with the number of closed loops removed.
    pub fn compose(&self, other: &TLDiagram) -> Result<(TLDiagram, usize)> {
        if self.top != other.bottom {
            return Err(TubeError::BoundaryMismatch(format!(
                "compose ({},{}) with ({},{})",
                self.bottom, self.top, other.bottom, other.top
            )));
        }
        let m = self.top;
        let (b, t) = (self.bottom, other.top);
        let mut pairing = vec![usize::MAX; b + t];
        let mut mid_seen = vec![false; m];
        // Walk from a boundary point to its partner across the middle.
        let walk = |start_lower: bool, start: usize, mid_seen: &mut Vec<bool>| -> usize {
            let mut in_lower = start_lower;
            let mut p = start;
            loop {
                if in_lower {
                    let q = self.pairing[p];
                    if q < b {
                        return q;
                    }
                    mid_seen[q - b] = true;
                    in_lower = false;
                    p = q - b;
                } else {
                    let q = other.pairing[p];
                    if q >= m {
                        return b + (q - m);
                    }
                    mid_seen[q] = true;
                    in_lower = true;
                    p = q + b;
                }
            }
        };
        for s in 0..b {
            if pairing[s] != usize::MAX {
                continue;
            }
            let e = walk(true, s, &mut mid_seen);
            pairing[s] = e;
            pairing[e] = s;
        }
        for s in 0..t {
            if pairing[b + s] != usize::MAX {
                continue;
            }
            let e = walk(false, m + s, &mut mid_seen);
            pairing[b + s] = e;
            pairing[e] = b + s;
        }
        let mut loops = 0;
        for z in 0..m {
            if mid_seen[z] {
                continue;
            }
            loops += 1;
            // Trace the closed cycle through unvisited middle points.
            let mut p = z;
            loop {
                mid_seen[p] = true;
                let q = self.pairing[p + b] - b;
                mid_seen[q] = true;
                let r = other.pairing[q];
                debug_assert!(r < m, "middle cycle escaped to the boundary");
                if r == z {
                    break;
                }
                p = r;
            }
        }
        Ok((TLDiagram::from_pairing(b, t, pairing), loops))
    }

    /// Horizontal juxtaposition.
    pub fn tensor(&self, other: &TLDiagram) -> TLDiagram {
        let (b1, t1) = (self.bottom, self.top);
        let (b2, t2) = (other.bottom, other.top);
        let map1 = |p: usize| if p < b1 { p } else { p + b2 };
        let map2 = |p: usize| if p < b2 { p + b1 } else { p + b1 + t1 };
        let mut pairing = vec![0; b1 + b2 + t1 + t2];
        for p in 0..b1 + t1 {
            pairing[map1(p)] = map1(self.pairing[p]);
        }
        for p in 0..b2 + t2 {
            pairing[map2(p)] = map2(other.pairing[p]);
        }
        TLDiagram::from_pairing(b1 + b2, t1 + t2, pairing)
    }

    /// Number of closed loops in the right-hand trace closure (only for
    /// square diagrams).
    pub fn closure_loops(&self) -> usize {
        assert_eq!(self.bottom, self.top);
        let k = self.bottom;
        let mut seen = vec![false; 2 * k];
        let mut loops = 0;
        for s in 0..2 * k {
            if seen[s] {
                continue;
            }
            loops += 1;
            let mut p = s;
            loop {
                seen[p] = true;
                let q = self.pairing[p];
                seen[q] = true;
                // closure arc joins bottom i and top i
                let r = if q < k { q + k } else { q - k };
                if r == s {
                    break;
                }
                p = r;
            }
        }
        loops
    }
}

/// All planar diagrams with the given boundary counts; the count is the
/// Catalan number `C_{(bottom+top)/2}`. Odd totals yield no diagrams.
pub fn enumerate_diagrams(bottom: usize, top: usize) -> Vec<TLDiagram> {
    let n = bottom + top;
    if n % 2 != 0 {
        return Vec::new();
    }
    // Enumerate non-crossing matchings in the boundary-cycle order, then map
    // cycle positions back to point indices.
    let to_point = |c: usize| {
        if c < bottom {
            c
        } else {
            bottom + top - 1 - (c - bottom)
        }
    };
    let mut out = Vec::new();
    fn rec(points: &[usize]) -> Vec<Vec<(usize, usize)>> {
        if points.is_empty() {
            return vec![Vec::new()];
        }
        let mut all = Vec::new();
        let first = points[0];
        for idx in (1..points.len()).step_by(2) {
            let second = points[idx];
            for inner in rec(&points[1..idx]) {
                for outer in rec(&points[idx + 1..]) {
                    let mut m = vec![(first, second)];
                    m.extend_from_slice(&inner);
                    m.extend_from_slice(&outer);
                    all.push(m);
                }
            }
        }
        all
    }
    let matchings = rec(&(0..n).collect::<Vec<_>>());
    for m in matchings {
        let pairs: Vec<(usize, usize)> = m
            .iter()
            .map(|&(a, b)| (to_point(a), to_point(b)))
            .collect();
        out.push(TLDiagram::new(bottom, top, &pairs).expect("enumerated diagram is planar"));
    }
    out.sort();
    out
}

/// A finite linear combination of `(bottom, top)` diagrams.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TLElement {
    bottom: usize,
    top: usize,
    terms: BTreeMap<TLDiagram, Scalar>,
}

impl TLElement {
    pub fn zero(bottom: usize, top: usize) -> Self {
        TLElement {
            bottom,
            top,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_diagram(d: TLDiagram) -> Self {
        let (b, t) = (d.bottom, d.top);
        let mut terms = BTreeMap::new();
        terms.insert(d, Scalar::one(ParamKind::Circle));
        TLElement {
            bottom: b,
            top: t,
            terms,
        }
    }

    pub fn identity(n: usize) -> Self {
        TLElement::from_diagram(TLDiagram::identity(n))
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TLDiagram, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff_of(&self, d: &TLDiagram) -> Scalar {
        self.terms
            .get(d)
            .cloned()
            .unwrap_or_else(|| Scalar::zero(ParamKind::Circle))
    }

    pub fn add_term(&mut self, d: TLDiagram, c: Scalar) {
        debug_assert_eq!((d.bottom, d.top), (self.bottom, self.top));
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

    pub fn add(&self, other: &TLElement) -> TLElement {
        let mut out = self.clone();
        for (d, c) in &other.terms {
            out.add_term(d.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> TLElement {
        let mut out = TLElement::zero(self.bottom, self.top);
        for (d, v) in &self.terms {
            out.add_term(d.clone(), v * c);
        }
        out
    }

    pub fn scale_rat(&self, c: &Rat) -> TLElement {
        self.scale(&Scalar::constant(ParamKind::Circle, c.clone()))
    }

    pub fn sub(&self, other: &TLElement) -> TLElement {
        self.add(&other.scale_rat(&-Rat::one()))
    }

    pub fn tensor(&self, other: &TLElement) -> TLElement {
        let mut out = TLElement::zero(self.bottom + other.bottom, self.top + other.top);
        for (d1, c1) in &self.terms {
            for (d2, c2) in &other.terms {
                out.add_term(d1.tensor(d2), c1 * c2);
            }
        }
        out
    }

    /// Vertical reflection with coefficient involution.
    pub fn star(&self) -> TLElement {
        let mut out = TLElement::zero(self.top, self.bottom);
        for (d, c) in &self.terms {
            out.add_term(d.flip(), c.involute());
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<serde_json::Value> = self
            .terms
            .iter()
            .map(|(d, c)| {
                serde_json::json!({
                    "pairing": d.pairing(),
                    "coeff": c.to_json(),
                })
            })
            .collect();
        serde_json::json!({
            "bottom": self.bottom,
            "top": self.top,
            "terms": terms,
        })
    }
}

/// Multiplicity of the weight-`j` simple summand in `n` strands.
pub fn dim_hom(n: usize, j: usize) -> usize {
    if j > n || (n - j) % 2 != 0 {
        return 0;
    }
    let binom = |n: usize, k: usize| -> usize {
        if k > n {
            return 0;
        }
        let mut acc: u128 = 1;
        for i in 0..k {
            acc = acc * (n - i) as u128 / (i + 1) as u128;
        }
        acc as usize
    };
    let h = (n - j) / 2;
    binom(n, h) - if h == 0 { 0 } else { binom(n, h - 1) }
}

/// Shared computation context: fixes `q` and memoizes Jones-Wenzl projectors.
pub struct TlContext {
    param: QParam,
    jw_memo: RwLock<HashMap<usize, TLElement>>,
}

impl TlContext {
    pub fn new(param: QParam) -> Self {
        TlContext {
            param,
            jw_memo: RwLock::new(HashMap::new()),
        }
    }

    pub fn param(&self) -> &QParam {
        &self.param
    }

    pub fn delta(&self) -> &Rat {
        self.param.delta()
    }

    pub fn delta_pow(&self, n: usize) -> Rat {
        self.param.delta().pow(n as i32)
    }

    pub fn compose(&self, x: &TLElement, y: &TLElement) -> Result<TLElement> {
        if x.top != y.bottom {
            return Err(TubeError::BoundaryMismatch(format!(
                "compose ({},{}) with ({},{})",
                x.bottom, x.top, y.bottom, y.top
            )));
        }
        let mut out = TLElement::zero(x.bottom, y.top);
        for (d1, c1) in &x.terms {
            for (d2, c2) in &y.terms {
                let (d, loops) = d1.compose(d2)?;
                let c = (c1 * c2).scale(&self.delta_pow(loops));
                out.add_term(d, c);
            }
        }
        Ok(out)
    }

    /// The trace closing all strands to the right; each closed loop counts
    /// `delta`.
    pub fn markov_trace(&self, x: &TLElement) -> Result<Scalar> {
        if x.bottom != x.top {
            return Err(TubeError::BoundaryMismatch(format!(
                "trace of a non-square ({},{}) element",
                x.bottom, x.top
            )));
        }
        let mut acc = Scalar::zero(ParamKind::Circle);
        for (d, c) in &x.terms {
            acc = &acc + &c.scale(&self.delta_pow(d.closure_loops()));
        }
        Ok(acc)
    }

    /// The Jones-Wenzl projector `f_k`, by the Wenzl recursion
    /// `f_k = f_{k-1}x1 - ([k-1]/[k]) (f_{k-1}x1) e_{k-1} (f_{k-1}x1)`.
    pub fn jones_wenzl(&self, k: usize) -> TLElement {
        if let Some(f) = self.jw_memo.read().unwrap().get(&k) {
            return f.clone();
        }
        let f = if k == 0 {
            TLElement::identity(0)
        } else if k == 1 {
            TLElement::identity(1)
        } else {
            let prev = self.jones_wenzl(k - 1);
            let ext = prev.tensor(&TLElement::identity(1));
            let e = TLElement::from_diagram(TLDiagram::e_gen(k, k - 2));
            let c = self.param.qint(k as i64 - 1) / self.param.qint(k as i64);
            let mid = self
                .compose(&self.compose(&ext, &e).unwrap(), &ext)
                .unwrap();
            ext.sub(&mid.scale_rat(&c))
        };
        self.jw_memo.write().unwrap().insert(k, f.clone());
        f
    }

    /// Basis of the morphism space from the weight-`j` simple to `n` strands:
    /// monic `(j, n)` diagrams composed with `f_j`.
    pub fn hom_basis(&self, n: usize, j: usize) -> Vec<TLElement> {
        let fj = self.jones_wenzl(j);
        enumerate_diagrams(j, n)
            .into_iter()
            .filter(|d| (0..j).all(|p| d.partner(p) >= j))
            .map(|d| {
                self.compose(&fj, &TLElement::from_diagram(d))
                    .expect("hom basis composition")
            })
            .collect()
    }

    /// The central projection of `n` strands onto the `f_j`-isotypic summand,
    /// in dual-basis form with the inverse Gram matrix (no square roots).
    pub fn isotypic_projector(&self, n: usize, j: usize) -> Result<TLElement> {
        if j > n || (n - j) % 2 != 0 {
            return Err(TubeError::ParityMismatch(format!(
                "no weight-{j} summand in {n} strands"
            )));
        }
        let basis = self.hom_basis(n, j);
        let dim = basis.len();
        let djr = self.param.qint(j as i64 + 1);
        let mut gram = vec![vec![Rat::zero(); dim]; dim];
        for a in 0..dim {
            for b in a..dim {
                // <v_a, v_b> f_j = v_b^* v_a; read off via the trace.
                let w = self.compose(&basis[a], &basis[b].star())?;
                let g = self
                    .markov_trace(&w)?
                    .as_constant()
                    .expect("rational gram entry")
                    / djr.clone();
                gram[a][b] = g.clone();
                gram[b][a] = g;
            }
        }
        let inv = rat_mat_inverse(&gram).ok_or_else(|| {
            TubeError::SingularGram(format!("hom space ({j} -> {n}) has singular gram matrix"))
        })?;
        let mut proj = TLElement::zero(n, n);
        for a in 0..dim {
            for b in 0..dim {
                if inv[a][b].is_zero() {
                    continue;
                }
                let t = self.compose(&basis[b].star(), &basis[a])?;
                proj = proj.add(&t.scale_rat(&inv[a][b]));
            }
        }
        Ok(proj)
    }
}

/// Dense exact inverse by Gauss-Jordan elimination.
pub fn rat_mat_inverse(m: &[Vec<Rat>]) -> Option<Vec<Vec<Rat>>> {
    let n = m.len();
    let mut a: Vec<Vec<Rat>> = m.to_vec();
    let mut inv: Vec<Vec<Rat>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Rat::one() } else { Rat::zero() })
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col].clone();
        for j in 0..n {
            a[col][j] /= p.clone();
            inv[col][j] /= p.clone();
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for j in 0..n {
                let x = &a[col][j] * &f;
                a[r][j] -= x;
                let y = &inv[col][j] * &f;
                inv[r][j] -= y;
            }
        }
    }
    Some(inv)
}

/// The cut of a square diagram along the vertical line separating the first
/// `alpha` columns from the rest; used by the cp-multiplier machinery.
///
/// Cut points are indexed from the bottom. Every strand crosses the line at
/// most once, and the crossing order is forced by planarity: caps from the
/// innermost out, then through strands, then cups from the outermost in.
pub struct CutDiagram {
    pub crossings: usize,
    /// Pairing on the left piece; points are `Left*` variants plus `Cut`.
    pub left: Vec<(CutPoint, CutPoint)>,
    pub right: Vec<(CutPoint, CutPoint)>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CutPoint {
    Bottom(usize),
    Top(usize),
    Cut(usize),
}

pub fn cut_at(d: &TLDiagram, alpha: usize) -> CutDiagram {
    let b = d.bottom();
    let t = d.top();
    assert!(alpha <= b && alpha <= t);
    let is_left = |p: usize| -> bool {
        if p < b {
            p < alpha
        } else {
            p - b < alpha
        }
    };
    #[derive(PartialEq)]
    enum Kind {
        Cap,
        Cup,
        Through,
    }
    let mut crossing: Vec<(usize, usize, Kind)> = Vec::new();
    let mut left = Vec::new();
    let mut right = Vec::new();
    let as_point = |p: usize| -> CutPoint {
        if p < b {
            CutPoint::Bottom(p)
        } else {
            CutPoint::Top(p - b)
        }
    };
    for p in 0..b + t {
        let q = d.partner(p);
        if p > q {
            continue;
        }
        match (is_left(p), is_left(q)) {
            (true, true) => left.push((as_point(p), as_point(q))),
            (false, false) => right.push((as_point(p), as_point(q))),
            _ => {
                let (l, r) = if is_left(p) { (p, q) } else { (q, p) };
                let kind = match (l < b, r < b) {
                    (true, true) => Kind::Cap,
                    (false, false) => Kind::Cup,
                    _ => Kind::Through,
                };
                crossing.push((l, r, kind));
            }
        }
    }
    // Height order along the cut line, bottom to top.
    crossing.sort_by_key(|(l, r, kind)| match kind {
        // caps: innermost (largest left endpoint) first
        Kind::Cap => (0i64, -(*l as i64)),
        // through strands: all share one orientation; left-to-right strands
        // stack by descending bottom endpoint, right-to-left by ascending
        Kind::Through => {
            if *l < b {
                (1, -(*l as i64))
            } else {
                (1, *r as i64)
            }
        }
        // cups: outermost (smallest left endpoint) first
        Kind::Cup => (2, *l as i64),
    });
    for (c, (l, r, _)) in crossing.iter().enumerate() {
        left.push((as_point(*l), CutPoint::Cut(c)));
        right.push((CutPoint::Cut(c), as_point(*r)));
    }
    CutDiagram {
        crossings: crossing.len(),
        left,
        right,
    }
}

/// Reassembles a cut diagram with a `(s, s)` element inserted sideways on the
/// cut line (bottom of the insert faces the left piece). Returns the glued
/// element.
pub fn glue_cut(
    ctx: &TlContext,
    cut: &CutDiagram,
    insert: &TLElement,
    bottom: usize,
    top: usize,
) -> TLElement {
    let s = cut.crossings;
    assert_eq!((insert.bottom(), insert.top()), (s, s));
    // Unified point space: original boundary points, then left cut copies
    // (insert bottoms), then right cut copies (insert tops).
    let n = bottom + top;
    let enc = |pt: &CutPoint, left_side: bool| -> usize {
        match pt {
            CutPoint::Bottom(i) => *i,
            CutPoint::Top(i) => bottom + *i,
            CutPoint::Cut(c) => n + if left_side { *c } else { s + *c },
        }
    };
    let mut adj = vec![usize::MAX; n + 2 * s];
    for (a, b) in &cut.left {
        let (x, y) = (enc(a, true), enc(b, true));
        adj[x] = y;
        adj[y] = x;
    }
    for (a, b) in &cut.right {
        let (x, y) = (enc(a, false), enc(b, false));
        adj[x] = y;
        adj[y] = x;
    }
    let mut out = TLElement::zero(bottom, top);
    for (mid, coeff) in insert.terms() {
        // Left cut c is insert point c, right cut c is insert point s + c, so
        // unified cut index x routes to mid.partner(x).
        let route = |x: usize| n + mid.partner(x - n);
        let mut pairing = vec![usize::MAX; n];
        let mut seen = vec![false; n + 2 * s];
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut cur = start;
            let end = loop {
                let q = adj[cur];
                seen[q] = true;
                if q < n {
                    break q;
                }
                cur = route(q);
                seen[cur] = true;
            };
            pairing[start] = end;
            pairing[end] = start;
        }
        let mut loops = 0usize;
        for c in n..n + 2 * s {
            if seen[c] {
                continue;
            }
            loops += 1;
            let mut cur = c;
            loop {
                seen[cur] = true;
                let via = route(cur);
                seen[via] = true;
                cur = adj[via];
                if cur == c {
                    break;
                }
            }
        }
        let d = TLDiagram::from_pairing(bottom, top, pairing);
        out.add_term(d, coeff.scale(&ctx.delta_pow(loops)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn ctx(q: i64) -> TlContext {
        TlContext::new(QParam::new(rat_int(q)).unwrap())
    }

    fn catalan(n: usize) -> usize {
        let mut c: u128 = 1;
        for i in 0..n {
            c = c * 2 * (2 * i as u128 + 1) / (i as u128 + 2);
        }
        c as usize
    }

    #[test]
    fn diagram_counts_are_catalan() {
        for total in (0..=16).step_by(2) {
            for b in 0..=total {
                let t = total - b;
                assert_eq!(
                    enumerate_diagrams(b, t).len(),
                    catalan(total / 2),
                    "({b},{t})"
                );
            }
        }
        assert_eq!(enumerate_diagrams(1, 2).len(), 0, "odd totals are empty");
        assert_eq!(enumerate_diagrams(0, 0).len(), 1);
        assert_eq!(enumerate_diagrams(2, 2).len(), 2);
        assert_eq!(enumerate_diagrams(3, 3).len(), 5);
    }

    #[test]
    fn compose_basics() {
        let c = ctx(2);
        let e1 = TLElement::from_diagram(TLDiagram::e_gen(2, 0));
        let sq = c.compose(&e1, &e1).unwrap();
        assert_eq!(sq, e1.scale_rat(c.delta()), "e_1 e_1 = delta e_1");

        let id = TLElement::identity(4);
        let x = TLElement::from_diagram(TLDiagram::e_gen(4, 1));
        assert_eq!(c.compose(&id, &x).unwrap(), x);
        assert_eq!(c.compose(&x, &id).unwrap(), x);

        let cup = TLElement::from_diagram(TLDiagram::cups_nested(1));
        let cap = TLElement::from_diagram(TLDiagram::caps_nested(1));
        let closed = c.compose(&cup, &cap).unwrap();
        let empty = TLElement::identity(0).scale_rat(c.delta());
        assert_eq!(closed, empty, "cup then cap closes one loop");
    }

    #[test]
    fn tensor_basics() {
        let strand = TLElement::identity(1);
        assert_eq!(strand.tensor(&strand), TLElement::identity(2));
        let e1 = TLElement::from_diagram(TLDiagram::e_gen(2, 0));
        assert_eq!(e1.tensor(&TLElement::identity(0)), e1);
        let d = TLDiagram::e_gen(2, 0).tensor(&TLDiagram::identity(1));
        assert_eq!(d, TLDiagram::e_gen(3, 0));
    }

    #[test]
    fn star_basics() {
        let cup = TLDiagram::cups_nested(1);
        assert_eq!(cup.flip(), TLDiagram::caps_nested(1));
        let c = ctx(2);
        for k in 0..=5 {
            let f = c.jones_wenzl(k);
            assert_eq!(f.star(), f, "f_{k} is self-adjoint");
        }
    }

    #[test]
    fn jones_wenzl_small() {
        let c = ctx(2);
        assert_eq!(c.jones_wenzl(1), TLElement::identity(1));
        // f_2 = 1 - (1/[2]) e_1
        let f2 = c.jones_wenzl(2);
        let expect = TLElement::identity(2).add(
            &TLElement::from_diagram(TLDiagram::e_gen(2, 0))
                .scale_rat(&(-c.param().qint(2).recip())),
        );
        assert_eq!(f2, expect);
    }

    #[test]
    fn jones_wenzl_idempotent_and_uncapable() {
        for q in [1, 2] {
            let c = ctx(q);
            for k in 0..=6usize {
                let f = c.jones_wenzl(k);
                assert_eq!(c.compose(&f, &f).unwrap(), f, "f_{k}^2 = f_{k} at q={q}");
                assert_eq!(
                    f.coeff_of(&TLDiagram::identity(k)),
                    Scalar::one(ParamKind::Circle),
                    "identity coefficient of f_{k}"
                );
                for i in 0..k.saturating_sub(1) {
                    let cap = TLElement::from_diagram(TLDiagram::cap_at(k, i));
                    assert!(
                        c.compose(&f, &cap).unwrap().is_zero(),
                        "cap_{i} f_{k} = 0 at q={q}"
                    );
                    let cup = TLElement::from_diagram(TLDiagram::cup_at(k, i));
                    assert!(
                        c.compose(&cup, &f).unwrap().is_zero(),
                        "f_{k} cup_{i} = 0 at q={q}"
                    );
                }
            }
        }
    }

    #[test]
    fn jones_wenzl_cap_coefficient() {
        // The hook diagram with a bottom cap at (n-1, n) (1-indexed position n)
        // and the top cup at the top-right carries coefficient (-1)^(n-k)[n]/[k].
        for q in [1, 2] {
            let c = ctx(q);
            for k in 2..=6usize {
                let f = c.jones_wenzl(k);
                for n in 1..k {
                    let mut pairs = vec![(n - 1, n), (2 * k - 2, 2 * k - 1)];
                    let mut tops = (k..2 * k - 2).collect::<Vec<_>>();
                    let mut bots = (0..k).filter(|p| *p != n - 1 && *p != n).collect::<Vec<_>>();
                    tops.reverse();
                    bots.reverse();
                    while let (Some(b), Some(t)) = (bots.pop(), tops.pop()) {
                        pairs.push((b, t));
                    }
                    let d = TLDiagram::new(k, k, &pairs).unwrap();
                    let sign = if (k - n) % 2 == 0 { 1 } else { -1 };
                    let expect = c.param().qint(n as i64) / c.param().qint(k as i64)
                        * rat_int(sign);
                    assert_eq!(
                        f.coeff_of(&d).as_constant().unwrap(),
                        expect,
                        "hook coefficient k={k} n={n} q={q}"
                    );
                }
            }
        }
    }

    #[test]
    fn markov_trace_values() {
        let c = ctx(2);
        for k in 0..=4usize {
            let tr = c.markov_trace(&TLElement::identity(k)).unwrap();
            assert_eq!(tr.as_constant().unwrap(), c.delta_pow(k));
        }
        let e1 = TLElement::from_diagram(TLDiagram::e_gen(2, 0));
        assert_eq!(
            c.markov_trace(&e1).unwrap().as_constant().unwrap(),
            *c.delta()
        );
        for q in [1, 2] {
            let c = ctx(q);
            for k in 0..=6usize {
                let tr = c.markov_trace(&c.jones_wenzl(k)).unwrap();
                assert_eq!(
                    tr.as_constant().unwrap(),
                    c.param().qint(k as i64 + 1),
                    "Tr f_{k} = [k+1] at q={q}"
                );
            }
        }
    }

    #[test]
    fn trace_ratio_recursion() {
        for q in [1, 2] {
            let c = ctx(q);
            for k in 1..=6 {
                let a = c
                    .markov_trace(&c.jones_wenzl(k))
                    .unwrap()
                    .as_constant()
                    .unwrap();
                let b = c
                    .markov_trace(&c.jones_wenzl(k - 1))
                    .unwrap()
                    .as_constant()
                    .unwrap();
                assert_eq!(
                    a / b,
                    c.param().qint(k as i64 + 1) / c.param().qint(k as i64)
                );
            }
        }
    }

    #[test]
    fn isotypic_projectors() {
        for q in [1, 2] {
            let c = ctx(q);
            // top summand is the Jones-Wenzl projector
            for n in 0..=4usize {
                assert_eq!(c.isotypic_projector(n, n).unwrap(), c.jones_wenzl(n));
            }
            // two strands onto weight zero: (1/delta) e_1
            let p = c.isotypic_projector(2, 0).unwrap();
            let expect = TLElement::from_diagram(TLDiagram::e_gen(2, 0))
                .scale_rat(&c.delta().recip());
            assert_eq!(p, expect);
            // resolution of identity and orthogonality
            for n in 1..=5usize {
                let mut sum = TLElement::zero(n, n);
                let js: Vec<usize> = (n % 2..=n).step_by(2).collect();
                for &j in &js {
                    sum = sum.add(&c.isotypic_projector(n, j).unwrap());
                }
                assert_eq!(sum, TLElement::identity(n), "sum of projectors at n={n}");
                for &j in &js {
                    let pj = c.isotypic_projector(n, j).unwrap();
                    assert_eq!(c.compose(&pj, &pj).unwrap(), pj);
                    for &l in &js {
                        if l != j {
                            let pl = c.isotypic_projector(n, l).unwrap();
                            assert!(c.compose(&pj, &pl).unwrap().is_zero());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn dim_hom_values() {
        assert_eq!(dim_hom(2, 0), 1);
        assert_eq!(dim_hom(4, 0), 2);
        assert_eq!(dim_hom(4, 2), 3);
        assert_eq!(dim_hom(4, 4), 1);
        assert_eq!(dim_hom(5, 1), 5);
        assert_eq!(dim_hom(5, 0), 0);
        for n in 0..=6usize {
            let total: usize = (0..=n).map(|j| dim_hom(n, j) * dim_hom(n, j)).sum();
            let cat = enumerate_diagrams(n, n).len();
            assert_eq!(total, cat, "sum of squared multiplicities at n={n}");
        }
    }

    #[test]
    fn cut_and_glue_identity() {
        let c = ctx(2);
        // cutting any diagram and regluing with the identity reproduces it
        for d in enumerate_diagrams(4, 4) {
            let cut = cut_at(&d, 2);
            let id = TLElement::identity(cut.crossings);
            let glued = glue_cut(&c, &cut, &id, 4, 4);
            assert_eq!(glued, TLElement::from_diagram(d.clone()), "reglue {d:?}");
        }
    }

    #[test]
    fn gram_inverse() {
        let m = vec![
            vec![rat_int(2), rat_int(1)],
            vec![rat_int(1), rat_int(1)],
        ];
        let inv = rat_mat_inverse(&m).unwrap();
        assert_eq!(inv[0][0], rat_int(1));
        assert_eq!(inv[0][1], rat_int(-1));
        assert_eq!(inv[1][0], rat_int(-1));
        assert_eq!(inv[1][1], rat_int(2));
        let sing = vec![
            vec![rat_int(1), rat_int(2)],
            vec![rat_int(2), rat_int(4)],
        ];
        assert!(rat_mat_inverse(&sing).is_none());
        let _ = rat(1, 2);
    }
}
