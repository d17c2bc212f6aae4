//! Chord diagrams on the circle and the limit subalgebras they degenerate
//! to: finite descriptions of codimension conditions on smooth functions.
//!
//! A chord `{phi, psi}` encodes the condition `f(phi) = f(psi)`; a diagram
//! is a finite set of chords and its rank is the codimension of the cut-out
//! subalgebra, computed combinatorially by union-find on the endpoint
//! graph. The limit algebras (`gimel`, `star`, `double star`) trade chords
//! for derivative conditions; membership of a concrete trigonometric
//! polynomial is decided by exact derivative evaluation.

use std::f64::consts::{PI, TAU};
use std::fmt;

use thiserror::Error;

use crate::trig::TrigPolynomial;

/// Tolerance under which two circle points are the same point.
pub const EPS_PT: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum ChordError {
    #[error("chord endpoints coincide (angle {0})")]
    CoincidentEndpoints(f64),
    #[error("gimel base points coincide (angle {0})")]
    CoincidentBasePoints(f64),
    #[error("projective parameter (0 : 0) is not a point of the projective line")]
    ZeroProjectivePair,
    #[error("resolution scale {0} out of range (need 0 < eps < pi/4)")]
    BadResolutionScale(f64),
    #[error("bad diagram syntax: {0}")]
    Syntax(String),
}

/// A point of the circle, kept as a canonical angle in `[0, 2 pi)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CirclePoint {
    angle: f64,
}

impl CirclePoint {
    pub fn new(angle: f64) -> Self {
        let mut a = angle.rem_euclid(TAU);
        // rem_euclid can land exactly on TAU after rounding.
        if a >= TAU {
            a = 0.0;
        }
        Self { angle: a }
    }

    pub fn angle(self) -> f64 {
        self.angle
    }

    /// Shortest angular distance along the circle.
    pub fn dist(self, other: Self) -> f64 {
        let d = (self.angle - other.angle).abs();
        d.min(TAU - d)
    }

    pub fn approx_eq(self, other: Self) -> bool {
        self.dist(other) <= EPS_PT
    }

    /// The point rotated by `delta` radians.
    pub fn rotate(self, delta: f64) -> Self {
        Self::new(self.angle + delta)
    }

    /// The antipodal point.
    pub fn antipode(self) -> Self {
        self.rotate(PI)
    }
}

impl fmt::Display for CirclePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.6}", self.angle)
    }
}

/// An unordered pair of distinct circle points; the condition
/// `f(a) = f(b)`.
#[derive(Clone, Copy, Debug)]
pub struct Chord {
    a: CirclePoint,
    b: CirclePoint,
}

impl Chord {
    pub fn new(a: CirclePoint, b: CirclePoint) -> Result<Self, ChordError> {
        if a.approx_eq(b) {
            return Err(ChordError::CoincidentEndpoints(a.angle()));
        }
        Ok(Self { a, b })
    }

    pub fn from_angles(a: f64, b: f64) -> Result<Self, ChordError> {
        Self::new(CirclePoint::new(a), CirclePoint::new(b))
    }

    pub fn endpoints(&self) -> (CirclePoint, CirclePoint) {
        (self.a, self.b)
    }

    /// Equality as unordered pairs, up to the point tolerance.
    pub fn approx_eq(&self, other: &Chord) -> bool {
        (self.a.approx_eq(other.a) && self.b.approx_eq(other.b))
            || (self.a.approx_eq(other.b) && self.b.approx_eq(other.a))
    }
}

impl fmt::Display for Chord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a, self.b)
    }
}

/// True when the endpoints of `c2` separate the endpoints of `c1` on the
/// circle, i.e. the four points alternate in cyclic order. Assumes the four
/// endpoints are pairwise distinct.
pub fn crossing(c1: &Chord, c2: &Chord) -> bool {
    // Walk counterclockwise from c1.a to c1.b; exactly one endpoint of c2
    // inside that arc means the chords cross.
    let arc = (c1.b.angle() - c1.a.angle()).rem_euclid(TAU);
    let inside = |p: CirclePoint| ((p.angle() - c1.a.angle()).rem_euclid(TAU)) < arc;
    inside(c2.a) != inside(c2.b)
}

/// A finite set of chords. Duplicate chords (as unordered pairs, up to the
/// point tolerance) collapse at construction.
#[derive(Clone, Debug, Default)]
pub struct ChordDiagram {
    chords: Vec<Chord>,
}

impl ChordDiagram {
    pub fn new(chords: Vec<Chord>) -> Self {
        let mut kept: Vec<Chord> = Vec::new();
        for c in chords {
            if !kept.iter().any(|k| k.approx_eq(&c)) {
                kept.push(c);
            }
        }
        Self { chords: kept }
    }

    /// Parses the CLI syntax `"a-b,c-d,..."`, angles in radians.
    pub fn parse(s: &str) -> Result<Self, ChordError> {
        let mut chords = Vec::new();
        for part in s.split(',') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let mut ends = part.split('-');
            let (x, y) = match (ends.next(), ends.next(), ends.next()) {
                (Some(x), Some(y), None) => (x, y),
                _ => {
                    return Err(ChordError::Syntax(format!(
                        "chord `{part}` is not of the form angle-angle"
                    )))
                }
            };
            let parse = |t: &str| {
                t.trim()
                    .parse::<f64>()
                    .map_err(|_| ChordError::Syntax(format!("bad angle `{t}` in chord `{part}`")))
            };
            chords.push(Chord::from_angles(parse(x)?, parse(y)?)?);
        }
        Ok(Self::new(chords))
    }

    pub fn chords(&self) -> &[Chord] {
        &self.chords
    }

    /// Distinct endpoints (after tolerance clustering) and for each chord
    /// the indices of its two endpoint classes.
    fn endpoint_classes(&self) -> (Vec<CirclePoint>, Vec<(usize, usize)>) {
        let mut points: Vec<CirclePoint> = Vec::new();
        let mut classify = |p: CirclePoint| -> usize {
            if let Some(i) = points.iter().position(|q| q.approx_eq(p)) {
                return i;
            }
            points.push(p);
            points.len() - 1
        };
        let edges = self
            .chords
            .iter()
            .map(|c| (classify(c.a), classify(c.b)))
            .collect();
        (points, edges)
    }

    /// The codimension of the cut-out subalgebra: distinct endpoints minus
    /// connected components of the endpoint graph.
    pub fn rank(&self) -> usize {
        let (points, edges) = self.endpoint_classes();
        let mut dsu = UnionFind::new(points.len());
        for (x, y) in edges {
            dsu.union(x, y);
        }
        points.len() - dsu.component_count()
    }

    /// Endpoint classes grouped by chord-connectivity. Blocks are sorted by
    /// their smallest angle and within a block by angle, so the output is
    /// canonical.
    pub fn partition(&self) -> Partition {
        let (points, edges) = self.endpoint_classes();
        let mut dsu = UnionFind::new(points.len());
        for (x, y) in edges {
            dsu.union(x, y);
        }
        let mut blocks: Vec<Vec<CirclePoint>> = Vec::new();
        let mut root_block: Vec<Option<usize>> = vec![None; points.len()];
        for (i, &p) in points.iter().enumerate() {
            let r = dsu.find(i);
            let slot = match root_block[r] {
                Some(s) => s,
                None => {
                    blocks.push(Vec::new());
                    root_block[r] = Some(blocks.len() - 1);
                    blocks.len() - 1
                }
            };
            blocks[slot].push(p);
        }
        for b in &mut blocks {
            b.sort_by(|p, q| p.angle().total_cmp(&q.angle()));
        }
        blocks.sort_by(|x, y| x[0].angle().total_cmp(&y[0].angle()));
        Partition { blocks }
    }
}

/// Whether two diagrams cut out the same subalgebra: their endpoint
/// partitions coincide.
pub fn same_point(d1: &ChordDiagram, d2: &ChordDiagram) -> bool {
    d1.partition().approx_eq(&d2.partition())
}

/// Equivalence classes of diagram endpoints under chord-connectivity.
/// Singleton blocks never occur (every endpoint lies on a chord).
#[derive(Clone, Debug)]
pub struct Partition {
    blocks: Vec<Vec<CirclePoint>>,
}

impl Partition {
    pub fn blocks(&self) -> &[Vec<CirclePoint>] {
        &self.blocks
    }

    /// The rank contributed by this partition: `sum (block size - 1)`.
    pub fn rank(&self) -> usize {
        self.blocks.iter().map(|b| b.len() - 1).sum()
    }

    pub fn approx_eq(&self, other: &Partition) -> bool {
        self.blocks.len() == other.blocks.len()
            && self.blocks.iter().zip(&other.blocks).all(|(x, y)| {
                x.len() == y.len() && x.iter().zip(y).all(|(p, q)| p.approx_eq(*q))
            })
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{{")?;
            for (j, p) in b.iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{p}")?;
            }
            write!(f, "}}")?;
        }
        Ok(())
    }
}

/// Union-find with union by rank and path compression.
struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
    components: usize,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self { parent: (0..n).collect(), rank: vec![0; n], components: n }
    }

    fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let root = self.find(self.parent[x]);
            self.parent[x] = root;
        }
        self.parent[x]
    }

    fn union(&mut self, x: usize, y: usize) {
        let (rx, ry) = (self.find(x), self.find(y));
        if rx == ry {
            return;
        }
        self.components -= 1;
        match self.rank[rx].cmp(&self.rank[ry]) {
            std::cmp::Ordering::Less => self.parent[rx] = ry,
            std::cmp::Ordering::Greater => self.parent[ry] = rx,
            std::cmp::Ordering::Equal => {
                self.parent[ry] = rx;
                self.rank[rx] += 1;
            }
        }
    }

    fn component_count(&self) -> usize {
        self.components
    }
}

/// A point of the real projective line, stored as a normalized pair
/// `(p : q)` meaning `p / q`, with `(1 : 0)` the point at infinity.
/// Normalization: unit Euclidean norm, first nonzero coordinate positive.
/// Inversion swaps the pair, so the `gimel` symmetry law is division-free.
#[derive(Clone, Copy, Debug)]
pub struct ProjectiveReal {
    p: f64,
    q: f64,
}

impl ProjectiveReal {
    pub fn new(p: f64, q: f64) -> Result<Self, ChordError> {
        let n = p.hypot(q);
        if !n.is_finite() || n < 1e-300 {
            return Err(ChordError::ZeroProjectivePair);
        }
        let (mut p, mut q) = (p / n, q / n);
        let lead = if p != 0.0 { p } else { q };
        if lead < 0.0 {
            p = -p;
            q = -q;
        }
        // Avoid the ambiguous -0.0 representations.
        if p == 0.0 {
            p = 0.0;
        }
        if q == 0.0 {
            q = 0.0;
        }
        Ok(Self { p, q })
    }

    pub fn from_real(alpha: f64) -> Self {
        Self::new(alpha, 1.0).expect("finite alpha with q = 1 cannot normalize to zero")
    }

    pub fn infinity() -> Self {
        Self { p: 1.0, q: 0.0 }
    }

    pub fn zero() -> Self {
        Self { p: 0.0, q: 1.0 }
    }

    /// The normalized pair `(p, q)`.
    pub fn pair(self) -> (f64, f64) {
        (self.p, self.q)
    }

    pub fn is_infinite(self) -> bool {
        self.q == 0.0
    }

    pub fn to_real(self) -> Option<f64> {
        (!self.is_infinite()).then(|| self.p / self.q)
    }

    /// `alpha -> 1/alpha`; exact (swaps the coordinates).
    pub fn inverse(self) -> Self {
        Self::new(self.q, self.p).expect("inverse of a normalized pair is nonzero")
    }

    /// Equality on the projective line: vanishing cross-determinant.
    pub fn approx_eq(self, other: Self) -> bool {
        (self.p * other.q - other.p * self.q).abs() <= EPS_PT
    }

    /// True when the represented value lies in `[0, +infinity]`
    /// (equivalently `p q >= 0` after normalization).
    pub fn is_nonnegative(self) -> bool {
        self.p * self.q >= 0.0
    }

    /// `(|alpha|, 1) / (|alpha| + 1)` read off projectively: the pair
    /// `(|p|, |q|) / (|p| + |q|)`, which extends continuously to infinity.
    pub fn resolution_fractions(self) -> (f64, f64) {
        let s = self.p.abs() + self.q.abs();
        (self.p.abs() / s, self.q.abs() / s)
    }
}

impl fmt::Display for ProjectiveReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_real() {
            Some(x) => write!(f, "{x:.6}"),
            None => write!(f, "inf"),
        }
    }
}

/// The subalgebra `f(phi) = f(psi), f'(phi) = alpha f'(psi)`.
/// `gimel(phi, psi; alpha)` and `gimel(psi, phi; 1/alpha)` are the same
/// algebra; `approx_eq` honors that identification.
#[derive(Clone, Copy, Debug)]
pub struct GimelAlgebra {
    pub phi: CirclePoint,
    pub psi: CirclePoint,
    pub alpha: ProjectiveReal,
}

impl GimelAlgebra {
    pub fn new(phi: CirclePoint, psi: CirclePoint, alpha: ProjectiveReal) -> Result<Self, ChordError> {
        if phi.approx_eq(psi) {
            return Err(ChordError::CoincidentBasePoints(phi.angle()));
        }
        Ok(Self { phi, psi, alpha })
    }

    pub fn approx_eq(&self, other: &Self) -> bool {
        (self.phi.approx_eq(other.phi)
            && self.psi.approx_eq(other.psi)
            && self.alpha.approx_eq(other.alpha))
            || (self.phi.approx_eq(other.psi)
                && self.psi.approx_eq(other.phi)
                && self.alpha.approx_eq(other.alpha.inverse()))
    }
}

/// The subalgebra `f'(phi) = 0, f'''(phi) = alpha f''(phi)`.
#[derive(Clone, Copy, Debug)]
pub struct StarAlgebra {
    pub phi: CirclePoint,
    pub alpha: f64,
}

/// The subalgebra `f'(phi) = f''(phi) = 0`.
#[derive(Clone, Copy, Debug)]
pub struct DoubleStarAlgebra {
    pub phi: CirclePoint,
}

/// Any of the finite subalgebra descriptions handled by [`contains`].
#[derive(Clone, Debug)]
pub enum AlgebraDescriptor {
    Diagram(ChordDiagram),
    Gimel(GimelAlgebra),
    Star(StarAlgebra),
    DoubleStar(DoubleStarAlgebra),
}

impl From<ChordDiagram> for AlgebraDescriptor {
    fn from(d: ChordDiagram) -> Self {
        Self::Diagram(d)
    }
}

impl From<GimelAlgebra> for AlgebraDescriptor {
    fn from(g: GimelAlgebra) -> Self {
        Self::Gimel(g)
    }
}

impl From<StarAlgebra> for AlgebraDescriptor {
    fn from(s: StarAlgebra) -> Self {
        Self::Star(s)
    }
}

impl From<DoubleStarAlgebra> for AlgebraDescriptor {
    fn from(s: DoubleStarAlgebra) -> Self {
        Self::DoubleStar(s)
    }
}

/// Whether `f` satisfies the defining equalities of the descriptor, within
/// `tol`. Derivatives are evaluated exactly on coefficients; no numerical
/// differentiation is involved.
pub fn contains(descriptor: &AlgebraDescriptor, f: &TrigPolynomial, tol: f64) -> bool {
    match descriptor {
        AlgebraDescriptor::Diagram(d) => d
            .chords()
            .iter()
            .all(|c| (f.eval(c.a.angle()) - f.eval(c.b.angle())).abs() <= tol),
        AlgebraDescriptor::Gimel(g) => {
            let df = f.derivative();
            let (p, q) = g.alpha.pair();
            (f.eval(g.phi.angle()) - f.eval(g.psi.angle())).abs() <= tol
                && (q * df.eval(g.phi.angle()) - p * df.eval(g.psi.angle())).abs() <= tol
        }
        AlgebraDescriptor::Star(s) => {
            let d1 = f.derivative();
            let d2 = d1.derivative();
            let d3 = d2.derivative();
            d1.eval(s.phi.angle()).abs() <= tol
                && (d3.eval(s.phi.angle()) - s.alpha * d2.eval(s.phi.angle())).abs() <= tol
        }
        AlgebraDescriptor::DoubleStar(s) => {
            let d1 = f.derivative();
            let d2 = d1.derivative();
            d1.eval(s.phi.angle()).abs() <= tol && d2.eval(s.phi.angle()).abs() <= tol
        }
    }
}

/// The explicit two-chord resolution of `gimel(phi, phi + pi; alpha)`:
/// with `a = |alpha| / (|alpha| + 1)` and `b = 1 / (|alpha| + 1)`, the
/// chords `(phi ± eps a, phi + pi ± eps b)` for `alpha >= 0`, and the
/// cross-matched signs for `alpha <= 0`. The two chords are distinct for
/// every `alpha` (they share an endpoint exactly at `alpha = 0` or
/// `alpha = infinity`), and replacing `(phi, alpha)` by
/// `(phi + pi, 1/alpha)` returns the same unordered pair.
pub fn chords_for_gimel(
    phi: CirclePoint,
    alpha: ProjectiveReal,
    eps: f64,
) -> Result<(Chord, Chord), ChordError> {
    if !(eps > 0.0 && eps < PI / 4.0) {
        return Err(ChordError::BadResolutionScale(eps));
    }
    let (a, b) = alpha.resolution_fractions();
    let near_plus = phi.rotate(eps * a);
    let near_minus = phi.rotate(-eps * a);
    let far = phi.antipode();
    let (far_first, far_second) = if alpha.is_nonnegative() {
        (far.rotate(eps * b), far.rotate(-eps * b))
    } else {
        (far.rotate(-eps * b), far.rotate(eps * b))
    };
    Ok((Chord::new(near_plus, far_first)?, Chord::new(near_minus, far_second)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    const FRAC_PI_2: f64 = std::f64::consts::FRAC_PI_2;

    fn diagram(chords: &[(f64, f64)]) -> ChordDiagram {
        ChordDiagram::new(
            chords.iter().map(|&(x, y)| Chord::from_angles(x, y).unwrap()).collect(),
        )
    }

    #[test]
    fn one_chord_has_rank_one() {
        assert_eq!(diagram(&[(0.0, 1.0)]).rank(), 1);
    }

    #[test]
    fn shared_endpoint_pair_has_rank_two() {
        // Two chords sharing one endpoint: three points, one component.
        let d = diagram(&[(0.1, 1.3), (1.3, 2.9)]);
        assert_eq!(d.rank(), 2);
    }

    #[test]
    fn triangle_has_rank_two() {
        let d = diagram(&[(0.1, 1.3), (1.3, 2.9), (0.1, 2.9)]);
        assert_eq!(d.rank(), 2);
    }

    #[test]
    fn partition_examples() {
        let d = diagram(&[(0.1, 1.3)]);
        assert_eq!(d.partition().blocks().len(), 1);
        assert_eq!(d.partition().blocks()[0].len(), 2);

        let path = diagram(&[(0.1, 1.3), (1.3, 2.9)]);
        assert_eq!(path.partition().blocks().len(), 1);
        assert_eq!(path.partition().blocks()[0].len(), 3);

        let disjoint = diagram(&[(0.1, 1.3), (2.0, 2.9)]);
        let blocks = disjoint.partition();
        assert_eq!(blocks.blocks().len(), 2);
        assert!(blocks.blocks().iter().all(|b| b.len() == 2));
        assert_eq!(blocks.rank(), disjoint.rank());
    }

    #[test]
    fn equivalent_spanning_trees_define_the_same_point() {
        // The three two-chord diagrams on the same three points.
        let (phi, psi, chi) = (0.3, 1.7, 4.0);
        let d1 = diagram(&[(phi, psi), (phi, chi)]);
        let d2 = diagram(&[(phi, psi), (psi, chi)]);
        let d3 = diagram(&[(phi, chi), (psi, chi)]);
        assert!(same_point(&d1, &d2));
        assert!(same_point(&d1, &d3));
        assert!(same_point(&d2, &d3));
    }

    #[test]
    fn different_block_structures_differ() {
        let disjoint = diagram(&[(0.1, 1.3), (2.0, 2.9)]);
        let triangle = diagram(&[(0.1, 1.3), (1.3, 2.9), (0.1, 2.9)]);
        assert!(!same_point(&disjoint, &triangle));
    }

    #[test]
    fn duplicate_chords_collapse() {
        let d = diagram(&[(0.0, 1.0), (1.0, 0.0)]);
        assert_eq!(d.chords().len(), 1);
        assert_eq!(d.rank(), 1);
    }

    #[test]
    fn coincident_endpoints_rejected() {
        assert!(matches!(
            Chord::from_angles(1.0, 1.0 + 1e-12),
            Err(ChordError::CoincidentEndpoints(_))
        ));
    }

    #[test]
    fn rank_of_acyclic_diagram_equals_chord_count() {
        let forest = diagram(&[(0.1, 1.0), (2.0, 3.0), (3.0, 4.0)]);
        assert_eq!(forest.rank(), 3);
        // Closing a cycle keeps the rank below the chord count.
        let cycle = diagram(&[(0.1, 1.0), (1.0, 2.0), (2.0, 0.1)]);
        assert_eq!(cycle.rank(), 2);
        assert!(cycle.rank() < cycle.chords().len());
    }

    #[test]
    fn gimel_on_cosine_forces_alpha_minus_one() {
        let cos = TrigPolynomial::cos(1);
        let phi = CirclePoint::new(FRAC_PI_2);
        let psi = CirclePoint::new(3.0 * FRAC_PI_2);
        let minus_one = GimelAlgebra::new(phi, psi, ProjectiveReal::from_real(-1.0)).unwrap();
        let plus_one = GimelAlgebra::new(phi, psi, ProjectiveReal::from_real(1.0)).unwrap();
        assert!(contains(&minus_one.into(), &cos, 1e-12));
        assert!(!contains(&plus_one.into(), &cos, 1e-12));
    }

    #[test]
    fn constants_lie_in_every_subalgebra() {
        let c = TrigPolynomial::constant(2.0);
        let phi = CirclePoint::new(0.4);
        let psi = CirclePoint::new(2.0);
        let descriptors: Vec<AlgebraDescriptor> = vec![
            diagram(&[(0.4, 2.0), (1.0, 5.0)]).into(),
            GimelAlgebra::new(phi, psi, ProjectiveReal::infinity()).unwrap().into(),
            StarAlgebra { phi, alpha: 0.7 }.into(),
            DoubleStarAlgebra { phi }.into(),
        ];
        for d in &descriptors {
            assert!(contains(d, &c, 1e-12));
        }
    }

    #[test]
    fn gimel_symmetry_law_for_membership() {
        let mut rng = SplitMix64::new(17);
        for _ in 0..200 {
            let phi = CirclePoint::new(rng.uniform(0.0, TAU));
            let psi = phi.rotate(rng.uniform(0.5, 3.0));
            let alpha = if rng.below(8) == 0 {
                ProjectiveReal::infinity()
            } else {
                ProjectiveReal::from_real(rng.uniform(-3.0, 3.0))
            };
            let g1 = GimelAlgebra::new(phi, psi, alpha).unwrap();
            let g2 = GimelAlgebra::new(psi, phi, alpha.inverse()).unwrap();
            assert!(g1.approx_eq(&g2));
            let f = TrigPolynomial::random(&mut rng, 4);
            assert_eq!(
                contains(&g1.into(), &f, 1e-9),
                contains(&g2.into(), &f, 1e-9),
                "membership must respect the gimel identification"
            );
        }
    }

    #[test]
    fn resolution_chords_at_alpha_one() {
        let (c1, c2) =
            chords_for_gimel(CirclePoint::new(0.0), ProjectiveReal::from_real(1.0), 0.1).unwrap();
        let want1 = Chord::from_angles(0.05, PI + 0.05).unwrap();
        let want2 = Chord::from_angles(-0.05, PI - 0.05).unwrap();
        assert!(c1.approx_eq(&want1));
        assert!(c2.approx_eq(&want2));
    }

    #[test]
    fn resolution_chords_share_an_endpoint_at_alpha_zero() {
        let (c1, c2) =
            chords_for_gimel(CirclePoint::new(0.0), ProjectiveReal::zero(), 0.1).unwrap();
        assert!(!c1.approx_eq(&c2));
        let (a1, _) = c1.endpoints();
        let (a2, _) = c2.endpoints();
        assert!(a1.approx_eq(a2) && a1.approx_eq(CirclePoint::new(0.0)));
    }

    #[test]
    fn resolution_chords_invariant_under_the_gimel_identification() {
        let mut rng = SplitMix64::new(23);
        let alphas = [
            ProjectiveReal::zero(),
            ProjectiveReal::from_real(0.5),
            ProjectiveReal::from_real(-0.5),
            ProjectiveReal::from_real(1.0),
            ProjectiveReal::from_real(-1.0),
            ProjectiveReal::from_real(2.0),
            ProjectiveReal::from_real(-2.0),
            ProjectiveReal::infinity(),
        ];
        for _ in 0..100 {
            let phi = CirclePoint::new(rng.uniform(0.0, TAU));
            for alpha in alphas {
                let (c1, c2) = chords_for_gimel(phi, alpha, 0.2).unwrap();
                assert!(!c1.approx_eq(&c2), "chords must stay distinct");
                let (d1, d2) = chords_for_gimel(phi.antipode(), alpha.inverse(), 0.2).unwrap();
                let same = (c1.approx_eq(&d1) && c2.approx_eq(&d2))
                    || (c1.approx_eq(&d2) && c2.approx_eq(&d1));
                assert!(same, "pair must be invariant under (phi, alpha) -> (phi + pi, 1/alpha)");
            }
        }
    }

    #[test]
    fn resolution_chords_continuous_across_branch_points() {
        let phi = CirclePoint::new(1.234);
        let eps = 0.15;
        let delta = 1e-7;
        let close = |x: (Chord, Chord), y: (Chord, Chord)| {
            let m = |c: &Chord, d: &Chord| {
                let (ca, cb) = c.endpoints();
                let (da, db) = d.endpoints();
                (ca.dist(da).max(cb.dist(db))).min(ca.dist(db).max(cb.dist(da)))
            };
            let paired = m(&x.0, &y.0).max(m(&x.1, &y.1));
            let swapped = m(&x.0, &y.1).max(m(&x.1, &y.0));
            paired.min(swapped) < 1e-6
        };
        // Across alpha = 0.
        let left = chords_for_gimel(phi, ProjectiveReal::from_real(-delta), eps).unwrap();
        let right = chords_for_gimel(phi, ProjectiveReal::from_real(delta), eps).unwrap();
        assert!(close(left, right));
        // Across alpha = infinity.
        let left = chords_for_gimel(phi, ProjectiveReal::from_real(-1.0 / delta), eps).unwrap();
        let right = chords_for_gimel(phi, ProjectiveReal::from_real(1.0 / delta), eps).unwrap();
        assert!(close(left, right));
    }

    #[test]
    fn bad_resolution_scale_rejected() {
        let phi = CirclePoint::new(0.0);
        assert!(chords_for_gimel(phi, ProjectiveReal::zero(), 0.0).is_err());
        assert!(chords_for_gimel(phi, ProjectiveReal::zero(), 1.0).is_err());
    }

    #[test]
    fn crossing_examples() {
        let diameter = Chord::from_angles(0.0, PI).unwrap();
        let other = Chord::from_angles(FRAC_PI_2, 3.0 * FRAC_PI_2).unwrap();
        assert!(crossing(&diameter, &other));
        let near = Chord::from_angles(0.0, FRAC_PI_2).unwrap();
        let far = Chord::from_angles(PI, 3.0 * FRAC_PI_2).unwrap();
        assert!(!crossing(&near, &far));
        let tilted = Chord::from_angles(0.1, PI + 0.1).unwrap();
        assert!(crossing(&diameter, &tilted));
        // Crossing is symmetric.
        assert!(crossing(&other, &diameter));
        assert!(!crossing(&far, &near));
    }

    #[test]
    fn projective_arithmetic() {
        let two = ProjectiveReal::from_real(2.0);
        assert!(two.inverse().approx_eq(ProjectiveReal::from_real(0.5)));
        assert!(ProjectiveReal::zero().inverse().is_infinite());
        assert!(ProjectiveReal::infinity().inverse().approx_eq(ProjectiveReal::zero()));
        assert!(ProjectiveReal::from_real(-3.0).approx_eq(ProjectiveReal::new(3.0, -1.0).unwrap()));
        assert!(ProjectiveReal::new(0.0, 0.0).is_err());
        // Sign classes.
        assert!(ProjectiveReal::zero().is_nonnegative());
        assert!(ProjectiveReal::infinity().is_nonnegative());
        assert!(!ProjectiveReal::from_real(-0.3).is_nonnegative());
    }

    #[test]
    fn parse_cli_syntax() {
        let d = ChordDiagram::parse("0.0-1.5708,2.0-3.0").unwrap();
        assert_eq!(d.chords().len(), 2);
        assert_eq!(d.rank(), 2);
        assert!(ChordDiagram::parse("0.0-0.0").is_err());
        assert!(ChordDiagram::parse("1.0").is_err());
        assert!(ChordDiagram::parse("a-b").is_err());
    }

    #[test]
    fn rank_matches_numeric_conditions_on_random_test_functions() {
        // Independent oracle: the rank of the condition matrix
        // (f_j(x) - f_j(y) per chord) on enough random test functions.
        let mut rng = SplitMix64::new(41);
        for _ in 0..60 {
            let n_chords = 1 + rng.below(5);
            let n_points = 3 + rng.below(5);
            let points: Vec<f64> = (0..n_points)
                .map(|i| i as f64 * TAU / n_points as f64 + rng.uniform(0.0, 0.3))
                .collect();
            let mut chords = Vec::new();
            for _ in 0..n_chords {
                let x = rng.below(n_points);
                let mut y = rng.below(n_points);
                if x == y {
                    y = (y + 1) % n_points;
                }
                chords.push(Chord::from_angles(points[x], points[y]).unwrap());
            }
            let d = ChordDiagram::new(chords);
            let funcs: Vec<TrigPolynomial> =
                (0..2 * n_points).map(|_| TrigPolynomial::random(&mut rng, 4)).collect();
            let rows: Vec<Vec<f64>> = d
                .chords()
                .iter()
                .map(|c| {
                    funcs
                        .iter()
                        .map(|f| f.eval(c.a.angle()) - f.eval(c.b.angle()))
                        .collect()
                })
                .collect();
            let sigma = crate::svd::singular_values(&crate::svd::Mat::from_rows(rows));
            let scale = sigma.first().copied().unwrap_or(0.0).max(1e-12);
            let numeric_rank = sigma.iter().filter(|s| **s > 1e-7 * scale).count();
            assert_eq!(d.rank(), numeric_rank, "diagram {:?}", d);
        }
    }
}
