//! Simplicial cohomology over GF(2) with cup products, and the two marked
//! surfaces the cup-square argument runs on: a Klein bottle and a torus
//! control built from the same grid.
//!
//! The cup product uses the front-face/back-face formula on ordered
//! simplices, so the complex keeps a single global vertex order and every
//! simplex is stored as a strictly increasing vertex tuple.

use std::collections::HashMap;

use thiserror::Error;

use crate::f2::{BitMatrix, BitVec, Span};

#[derive(Debug, Error, PartialEq)]
pub enum SimplicialError {
    #[error("simplex {0:?} has a repeated vertex")]
    RepeatedVertex(Vec<usize>),
    #[error("unknown simplex {0:?}")]
    UnknownSimplex(Vec<usize>),
    #[error("degree {got} out of range (complex dimension {dim})")]
    DegreeOutOfRange { got: usize, dim: usize },
    #[error("cochain degrees {0} + {1} exceed the complex dimension")]
    DegreeOverflow(usize, usize),
    #[error("cochain is not a cocycle")]
    NotACocycle,
    #[error("no cocycle with the requested pairings exists")]
    NoSuchCocycle,
    #[error("grid side must be at least 3, got {0}")]
    GridTooSmall(usize),
    #[error("total class must start with 1 to be invertible")]
    NonUnitTotalClass,
}

/// A finite simplicial complex with a global vertex order. Simplices are
/// strictly increasing vertex tuples, closed under faces, and listed in
/// lexicographic order inside each dimension (so cochain indices are
/// canonical).
#[derive(Clone, Debug)]
pub struct OrderedSimplicialComplex {
    by_dim: Vec<Vec<Vec<usize>>>,
    index: Vec<HashMap<Vec<usize>, usize>>,
}

impl OrderedSimplicialComplex {
    /// Builds the closure of the given simplices.
    pub fn from_simplices<I>(simplices: I) -> Result<Self, SimplicialError>
    where
        I: IntoIterator<Item = Vec<usize>>,
    {
        let mut seen: Vec<std::collections::BTreeSet<Vec<usize>>> = Vec::new();
        let mut stack: Vec<Vec<usize>> = Vec::new();
        for mut s in simplices {
            s.sort_unstable();
            if s.windows(2).any(|w| w[0] == w[1]) {
                return Err(SimplicialError::RepeatedVertex(s));
            }
            stack.push(s);
        }
        while let Some(s) = stack.pop() {
            let d = s.len() - 1;
            if seen.len() <= d {
                seen.resize_with(d + 1, Default::default);
            }
            if !seen[d].insert(s.clone()) {
                continue;
            }
            if d > 0 {
                for drop in 0..s.len() {
                    let mut face = s.clone();
                    face.remove(drop);
                    stack.push(face);
                }
            }
        }
        let by_dim: Vec<Vec<Vec<usize>>> =
            seen.into_iter().map(|set| set.into_iter().collect()).collect();
        let index = by_dim
            .iter()
            .map(|list| {
                list.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect::<HashMap<_, _>>()
            })
            .collect();
        Ok(Self { by_dim, index })
    }

    /// Top dimension; the empty complex has dimension 0 by convention.
    pub fn dimension(&self) -> usize {
        self.by_dim.len().saturating_sub(1)
    }

    pub fn simplices(&self, d: usize) -> &[Vec<usize>] {
        self.by_dim.get(d).map_or(&[], Vec::as_slice)
    }

    pub fn simplex_count(&self, d: usize) -> usize {
        self.simplices(d).len()
    }

    pub fn index_of(&self, simplex: &[usize]) -> Option<usize> {
        let d = simplex.len().checked_sub(1)?;
        self.index.get(d)?.get(simplex).copied()
    }

    /// Every face of every simplex is present (true by construction; used
    /// as a sanity check by tests and the report).
    pub fn is_closed_under_faces(&self) -> bool {
        for d in 1..self.by_dim.len() {
            for s in &self.by_dim[d] {
                for drop in 0..s.len() {
                    let mut face = s.clone();
                    face.remove(drop);
                    if self.index_of(&face).is_none() {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.by_dim
            .iter()
            .enumerate()
            .map(|(d, list)| if d % 2 == 0 { list.len() as i64 } else { -(list.len() as i64) })
            .sum()
    }

    /// The mod-2 boundary matrix from `k`-simplices to `(k-1)`-simplices.
    pub fn boundary_matrix(&self, k: usize) -> BitMatrix {
        if k == 0 || k > self.dimension() {
            return BitMatrix::zeros(0, self.simplex_count(k));
        }
        let mut m = BitMatrix::zeros(self.simplex_count(k - 1), self.simplex_count(k));
        for (j, s) in self.simplices(k).iter().enumerate() {
            for drop in 0..s.len() {
                let mut face = s.clone();
                face.remove(drop);
                let i = self.index_of(&face).expect("closed under faces");
                m.set(i, j, true);
            }
        }
        m
    }

    /// Mod-2 Betti numbers, one per dimension.
    pub fn betti_mod2(&self) -> Vec<usize> {
        let dim = self.dimension();
        let rank = |k: usize| {
            if k == 0 || k > dim {
                0
            } else {
                self.boundary_matrix(k).rank()
            }
        };
        (0..=dim).map(|k| self.simplex_count(k) - rank(k) - rank(k + 1)).collect()
    }
}

/// A GF(2) cochain: one bit per simplex of its degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain {
    pub degree: usize,
    pub bits: BitVec,
}

impl Cochain {
    pub fn zero(complex: &OrderedSimplicialComplex, degree: usize) -> Self {
        Self { degree, bits: BitVec::zeros(complex.simplex_count(degree)) }
    }

    /// The indicator cochain of a set of simplices.
    pub fn indicator<I>(
        complex: &OrderedSimplicialComplex,
        degree: usize,
        simplices: I,
    ) -> Result<Self, SimplicialError>
    where
        I: IntoIterator<Item = Vec<usize>>,
    {
        let mut c = Self::zero(complex, degree);
        for mut s in simplices {
            s.sort_unstable();
            let i = complex.index_of(&s).ok_or(SimplicialError::UnknownSimplex(s))?;
            c.bits.flip(i);
        }
        Ok(c)
    }

    /// The constant-1 cochain in degree 0 (the ring unit).
    pub fn unit(complex: &OrderedSimplicialComplex) -> Self {
        Self { degree: 0, bits: BitVec::from_bits(vec![true; complex.simplex_count(0)]) }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.degree, other.degree, "cochain degree mismatch");
        Self { degree: self.degree, bits: self.bits.xor(&other.bits) }
    }

    pub fn is_zero(&self) -> bool {
        self.bits.is_zero()
    }
}

/// A GF(2) simplicial chain, same representation as a cochain but on the
/// homological side: pairing is the bitwise dot product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialChain {
    pub degree: usize,
    pub bits: BitVec,
}

impl SimplicialChain {
    pub fn from_simplices<I>(
        complex: &OrderedSimplicialComplex,
        degree: usize,
        simplices: I,
    ) -> Result<Self, SimplicialError>
    where
        I: IntoIterator<Item = Vec<usize>>,
    {
        let c = Cochain::indicator(complex, degree, simplices)?;
        Ok(Self { degree, bits: c.bits })
    }

    /// All top-dimensional simplices; the mod-2 fundamental chain of a
    /// closed surface.
    pub fn fundamental(complex: &OrderedSimplicialComplex) -> Self {
        let d = complex.dimension();
        Self { degree: d, bits: BitVec::from_bits(vec![true; complex.simplex_count(d)]) }
    }

    pub fn boundary(&self, complex: &OrderedSimplicialComplex) -> SimplicialChain {
        if self.degree == 0 {
            return SimplicialChain { degree: 0, bits: BitVec::zeros(complex.simplex_count(0)) };
        }
        let m = complex.boundary_matrix(self.degree);
        SimplicialChain {
            degree: self.degree - 1,
            bits: m.mul_vec(&self.bits).expect("chain built against this complex"),
        }
    }

    pub fn is_cycle(&self, complex: &OrderedSimplicialComplex) -> bool {
        self.boundary(complex).bits.is_zero()
    }
}

/// `<x, z>` mod 2 for a cochain and a chain of the same degree.
pub fn pair(x: &Cochain, z: &SimplicialChain) -> bool {
    assert_eq!(x.degree, z.degree, "pairing degree mismatch");
    x.bits.dot(&z.bits)
}

/// The simplicial coboundary: `(dx)(s) = sum of x over the facets of s`.
pub fn coboundary(
    complex: &OrderedSimplicialComplex,
    x: &Cochain,
) -> Result<Cochain, SimplicialError> {
    if x.degree >= complex.dimension() {
        return Err(SimplicialError::DegreeOutOfRange {
            got: x.degree + 1,
            dim: complex.dimension(),
        });
    }
    let mut out = Cochain::zero(complex, x.degree + 1);
    for (j, s) in complex.simplices(x.degree + 1).iter().enumerate() {
        let mut bit = false;
        for drop in 0..s.len() {
            let mut face = s.clone();
            face.remove(drop);
            let i = complex.index_of(&face).expect("closed under faces");
            bit ^= x.bits.get(i);
        }
        out.bits.set(j, bit);
    }
    Ok(out)
}

pub fn is_cocycle(complex: &OrderedSimplicialComplex, x: &Cochain) -> bool {
    if x.degree >= complex.dimension() {
        return true;
    }
    coboundary(complex, x).map(|d| d.is_zero()).unwrap_or(false)
}

/// The cup product by the front-face/back-face rule on the global vertex
/// order: `(x cup y)(v_0..v_{p+q}) = x(v_0..v_p) y(v_p..v_{p+q})`.
pub fn cup(
    complex: &OrderedSimplicialComplex,
    x: &Cochain,
    y: &Cochain,
) -> Result<Cochain, SimplicialError> {
    let (p, q) = (x.degree, y.degree);
    if p + q > complex.dimension() {
        return Err(SimplicialError::DegreeOverflow(p, q));
    }
    let mut out = Cochain::zero(complex, p + q);
    for (j, s) in complex.simplices(p + q).iter().enumerate() {
        let front = &s[..=p];
        let back = &s[p..];
        let xi = complex.index_of(front).expect("front face present");
        let yi = complex.index_of(back).expect("back face present");
        if x.bits.get(xi) && y.bits.get(yi) {
            out.bits.set(j, true);
        }
    }
    Ok(out)
}

/// A closed surface triangulation with two marked 1-cycles and its
/// fundamental 2-chain.
#[derive(Clone, Debug)]
pub struct MarkedSurface {
    pub complex: OrderedSimplicialComplex,
    /// The fiber-direction loop (`u`).
    pub loop_u: SimplicialChain,
    /// The cross-section-direction loop (`v`).
    pub loop_v: SimplicialChain,
    pub fundamental_class: SimplicialChain,
}

/// The side of the grid used for the quotient surfaces.
const GRID: usize = 4;

fn grid_surface(n: usize, flip: bool) -> Result<MarkedSurface, SimplicialError> {
    if n < 3 {
        return Err(SimplicialError::GridTooSmall(n));
    }
    // Quotient map on grid corners (col i, row j), 0..=n each:
    // top edge glues straight to the bottom (j = n -> 0); the right edge
    // glues to the left either flipped (Klein bottle) or straight (torus).
    let q = |i: usize, j: usize| -> usize {
        let j = j % n;
        let (i, j) = if i == n {
            (0, if flip { (n - j) % n } else { j })
        } else {
            (i, j)
        };
        j * n + i
    };
    let mut triangles = Vec::with_capacity(2 * n * n);
    for i in 0..n {
        for j in 0..n {
            let p00 = q(i, j);
            let p10 = q(i + 1, j);
            let p01 = q(i, j + 1);
            let p11 = q(i + 1, j + 1);
            triangles.push(vec![p00, p10, p11]);
            triangles.push(vec![p00, p11, p01]);
        }
    }
    let complex = OrderedSimplicialComplex::from_simplices(triangles)?;
    assert_eq!(complex.simplex_count(0), n * n, "vertex identification collapsed the grid");
    assert_eq!(complex.simplex_count(2), 2 * n * n, "triangle identification collapsed the grid");
    // u: the vertical edge path at column 0 (the fiber direction).
    let loop_u = SimplicialChain::from_simplices(
        &complex,
        1,
        (0..n).map(|j| vec![q(0, j), q(0, j + 1)]),
    )?;
    // v: the horizontal edge path at row 0 (the cross-section direction).
    let loop_v = SimplicialChain::from_simplices(
        &complex,
        1,
        (0..n).map(|i| vec![q(i, 0), q(i + 1, 0)]),
    )?;
    let fundamental_class = SimplicialChain::fundamental(&complex);
    Ok(MarkedSurface { complex, loop_u, loop_v, fundamental_class })
}

/// A fixed Klein-bottle triangulation: an `n x n` grid on the unit square
/// with `(t, 0) ~ (t, 1)` and `(0, s) ~ (1, 1 - s)`. The marked loop `v`
/// runs along the base (cross-section) direction and `u` along the fiber.
pub fn klein_bottle() -> MarkedSurface {
    grid_surface(GRID, true).expect("fixed grid construction is valid")
}

/// The orientation-preserving control gluing of the same grid: a torus.
/// Every 1-cocycle on it has vanishing cup square, which isolates the
/// Klein gluing as the source of the nonzero square.
pub fn torus() -> MarkedSurface {
    grid_surface(GRID, false).expect("fixed grid construction is valid")
}

/// A 1-cocycle `w` with `<w, u> = 1` and `<w, v> = 0`, found by solving
/// over the cocycle space. This is the restriction behavior that the
/// degree-one generator of the ambient variety must have on this surface.
pub fn restricted_w(surface: &MarkedSurface) -> Result<Cochain, SimplicialError> {
    let complex = &surface.complex;
    let n_edges = complex.simplex_count(1);
    let n_tris = complex.simplex_count(2);
    // Rows: one coboundary condition per triangle, then the two pairings.
    let mut m = BitMatrix::zeros(n_tris + 2, n_edges);
    for (t, s) in complex.simplices(2).iter().enumerate() {
        for drop in 0..3 {
            let mut face = s.clone();
            face.remove(drop);
            let e = complex.index_of(&face).expect("closed under faces");
            m.set(t, e, true);
        }
    }
    for e in surface.loop_u.bits.ones() {
        m.set(n_tris, e, true);
    }
    for e in surface.loop_v.bits.ones() {
        m.set(n_tris + 1, e, true);
    }
    let mut rhs = BitVec::zeros(n_tris + 2);
    rhs.set(n_tris, true);
    let solution = m
        .solve(&rhs)
        .expect("rhs length matches by construction")
        .ok_or(SimplicialError::NoSuchCocycle)?;
    let w = Cochain { degree: 1, bits: solution };
    debug_assert!(is_cocycle(complex, &w));
    Ok(w)
}

/// `<x cup x, [surface]>` mod 2 for a 1-cocycle `x`.
pub fn cup_square_pairing(surface: &MarkedSurface, x: &Cochain) -> Result<bool, SimplicialError> {
    if !is_cocycle(&surface.complex, x) {
        return Err(SimplicialError::NotACocycle);
    }
    let square = cup(&surface.complex, x, x)?;
    Ok(pair(&square, &surface.fundamental_class))
}

/// Cocycles whose classes form a basis of the degree-`k` mod-2 cohomology.
pub fn cohomology_basis(
    complex: &OrderedSimplicialComplex,
    k: usize,
) -> Result<Vec<Cochain>, SimplicialError> {
    if k > complex.dimension() {
        return Err(SimplicialError::DegreeOutOfRange { got: k, dim: complex.dimension() });
    }
    let n = complex.simplex_count(k);
    // delta_k as a matrix is the transpose of the boundary matrix one up.
    let cocycles: Vec<BitVec> = if k == complex.dimension() {
        (0..n)
            .map(|i| {
                let mut v = BitVec::zeros(n);
                v.set(i, true);
                v
            })
            .collect()
    } else {
        complex.boundary_matrix(k + 1).transpose().kernel_basis()
    };
    let coboundaries: Vec<BitVec> = if k == 0 {
        Vec::new()
    } else {
        let d = complex.boundary_matrix(k);
        (0..complex.simplex_count(k - 1))
            .map(|i| d.row(i))
            .collect()
    };
    let mut span = Span::with_vectors(&coboundaries);
    let target = cocycles.len() - span.rank();
    let mut basis = Vec::new();
    for v in cocycles {
        if basis.len() == target {
            break;
        }
        if span.insert(&v) {
            basis.push(Cochain { degree: k, bits: v });
        }
    }
    Ok(basis)
}

/// Truncated powers of a total class in `GF(2)[W] / (W^{max_degree + 1})`.
/// `class[d]` is the degree-`d` component; the constant term must be 1.
/// Negative powers invert the class first (power-series inversion).
pub fn truncated_poly_power(
    class: &[u8],
    power: i64,
    max_degree: usize,
) -> Result<Vec<u8>, SimplicialError> {
    if class.first().map(|&c| c & 1) != Some(1) {
        return Err(SimplicialError::NonUnitTotalClass);
    }
    let d = max_degree + 1;
    let norm = |v: &[u8]| -> Vec<u8> {
        (0..d).map(|i| v.get(i).copied().unwrap_or(0) & 1).collect()
    };
    let mul = |x: &[u8], y: &[u8]| -> Vec<u8> {
        let mut out = vec![0u8; d];
        for i in 0..d {
            if x[i] == 0 {
                continue;
            }
            for j in 0..d - i {
                out[i + j] ^= x[i] & y[j];
            }
        }
        out
    };
    let base = norm(class);
    let base = if power < 0 {
        // Power-series inverse: u_0 = 1, u_k = sum_{j>=1} a_j u_{k-j}.
        let mut inv = vec![0u8; d];
        inv[0] = 1;
        for k in 1..d {
            let mut acc = 0u8;
            for j in 1..=k {
                acc ^= base[j] & inv[k - j];
            }
            inv[k] = acc;
        }
        inv
    } else {
        base
    };
    let mut out = vec![0u8; d];
    out[0] = 1;
    for _ in 0..power.unsigned_abs() {
        out = mul(&out, &base);
    }
    Ok(out)
}
