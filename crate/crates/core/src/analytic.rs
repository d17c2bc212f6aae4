//! The analytic verifications: parity of antipodal critical pairs, section
//! zero counts on the Klein cycle, monodromy signs of transported frames,
//! the degree-one trivialization determinant, and the degeneracy scan of
//! six evaluation conditions against a seven-dimensional map space.
//!
//! Root counting is certificate-based throughout: a root is reported only
//! when a sign change brackets it, and bisection merely sharpens the
//! bracket. Functions whose structure makes the count ill-posed (identically
//! vanishing determinants, flat windows, tangencies) surface as `Degenerate`
//! values rather than as guesses.

use std::f64::consts::{PI, TAU};

use serde::Serialize;
use thiserror::Error;

use crate::chord::{Chord, ChordError, ProjectiveReal};
use crate::rng::SplitMix64;
use crate::svd::{singular_values, Mat};
use crate::trig::TrigPolynomial;

#[derive(Debug, Error, PartialEq)]
pub enum AnalyticError {
    #[error("need at least {need} samples for degrees {df} + {dg}, got {got}")]
    TooFewSamples { need: usize, got: usize, df: usize, dg: usize },
    #[error("step count {0} is too small")]
    TooFewSteps(usize),
    #[error("frame transport is ambiguous at {steps} steps; refine the walk")]
    AmbiguousTransport { steps: usize },
    #[error("subspace basis is numerically dependent (sigma ratio {ratio:.3e})")]
    DependentBasis { ratio: f64 },
    #[error("degeneracy scan needs a 7-dimensional subspace, got {0}")]
    BadSubspaceDimension(usize),
    #[error("scan grid must be at least {min} per axis, got {got}")]
    GridTooSmall { min: usize, got: usize },
    #[error(transparent)]
    Chord(#[from] ChordError),
}

// ---------------------------------------------------------------------------
// Antipodal critical pairs (the Borsuk--Ulam-style count)
// ---------------------------------------------------------------------------

/// The direction `(lambda : mu)` of a combination `lambda f + mu g` whose
/// derivative vanishes at a certified antipodal pair.
pub type KernelDirection = ProjectiveReal;

/// One certified root of the antipodal determinant.
#[derive(Clone, Copy, Debug)]
pub struct BuRoot {
    /// Position in `[0, pi)`; the condition also holds at `phi + pi`.
    pub phi: f64,
    pub direction: KernelDirection,
}

/// Outcome of the root count for one pair of functions.
#[derive(Clone, Debug)]
pub enum BuRoots {
    /// The pair is non-generic: the determinant is (numerically)
    /// identically zero, or a flat window / tangency defeated root
    /// certification.
    Degenerate,
    Roots(Vec<BuRoot>),
}

/// Parity verdict for a pair of functions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Parity {
    Odd,
    Even,
    Degenerate,
}

/// The antipodal determinant
/// `h(phi) = f'(phi) g'(phi + pi) - g'(phi) f'(phi + pi)`
/// as an exact trigonometric polynomial. `h` is antiperiodic:
/// `h(phi + pi) = -h(phi)` identically on coefficients.
pub fn bu_determinant_poly(f: &TrigPolynomial, g: &TrigPolynomial) -> TrigPolynomial {
    let df = f.derivative();
    let dg = g.derivative();
    df.mul(&dg.shift_half_turn()).sub(&dg.mul(&df.shift_half_turn()))
}

/// Pointwise value of the antipodal determinant.
pub fn bu_determinant(f: &TrigPolynomial, g: &TrigPolynomial, phi: f64) -> f64 {
    let df = f.derivative();
    let dg = g.derivative();
    df.eval(phi) * dg.eval(phi + PI) - dg.eval(phi) * df.eval(phi + PI)
}

/// Relative scale below which the determinant counts as identically zero.
const DEGENERATE_PAIR_TOL: f64 = 1e-8;
/// Relative scale below which a sample value counts as an exact zero.
const ZERO_SAMPLE_TOL: f64 = 1e-12;

/// Certified roots of an antiperiodic trigonometric polynomial on the
/// half-period `[0, pi)`. Returns `None` when certification fails (flat
/// windows of three or more samples, or tangential contact).
fn antiperiodic_roots(h: &TrigPolynomial, samples: usize, tol: f64) -> Option<Vec<f64>> {
    let n = samples;
    let step = PI / n as f64;
    let values: Vec<f64> = (0..n).map(|i| h.eval(i as f64 * step)).collect();
    let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return None;
    }
    let zero_tol = ZERO_SAMPLE_TOL * scale;
    // Sign pattern; by antiperiodicity it extends to all of R with
    // sign(i + n) = -sign(i), and the zero/nonzero pattern has period n.
    let sign = |i: isize| -> i8 {
        let m = i.rem_euclid(n as isize) as usize;
        let flips = (i - m as isize) / n as isize;
        let s = if values[m].abs() <= zero_tol {
            0
        } else if values[m] > 0.0 {
            1
        } else {
            -1
        };
        if flips.rem_euclid(2) == 1 {
            -s
        } else {
            s
        }
    };

    let mut roots: Vec<f64> = Vec::new();
    let mut i: isize = 0;
    while i < n as isize {
        if sign(i) == 0 {
            // Maximal run of zero samples starting at i (runs never wrap
            // past a full period because the pattern repeats).
            let mut len = 1;
            while sign(i + len) == 0 {
                len += 1;
                if len as usize >= n {
                    return None; // everything flat
                }
            }
            if len >= 3 {
                return None; // flat window: degenerate
            }
            let before = sign(i - 1);
            let after = sign(i + len);
            if before == 0 || before == after {
                return None; // tangency or unresolved window
            }
            let root = (i as f64 + (len - 1) as f64 / 2.0) * step;
            roots.push(root.rem_euclid(PI));
            i += len;
        } else {
            if sign(i + 1) != 0 && sign(i + 1) != sign(i) {
                let (mut lo, mut hi) = (i as f64 * step, (i + 1) as f64 * step);
                let (mut flo, fhi) = (h.eval(lo), h.eval(hi));
                debug_assert!(flo * fhi < 0.0);
                while hi - lo > tol {
                    let mid = 0.5 * (lo + hi);
                    let fmid = h.eval(mid);
                    if fmid == 0.0 {
                        lo = mid;
                        hi = mid;
                    } else if (fmid > 0.0) == (flo > 0.0) {
                        lo = mid;
                        flo = fmid;
                    } else {
                        hi = mid;
                    }
                }
                roots.push((0.5 * (lo + hi)).rem_euclid(PI));
            }
            i += 1;
        }
    }
    roots.sort_by(f64::total_cmp);
    Some(roots)
}

/// Certified antipodal critical pairs of `lambda f + mu g` on `[0, pi)`.
/// `samples` must be at least `8 (deg f + deg g)` so that simple roots of
/// the degree-`(deg f + deg g)` determinant cannot hide between samples.
pub fn bu_roots(
    f: &TrigPolynomial,
    g: &TrigPolynomial,
    samples: usize,
    tol: f64,
) -> Result<BuRoots, AnalyticError> {
    let (df, dg) = (f.degree(), g.degree());
    let need = (8 * (df + dg)).max(8);
    if samples < need {
        return Err(AnalyticError::TooFewSamples { need, got: samples, df, dg });
    }
    let h = bu_determinant_poly(f, g);
    let scale = f.derivative().coeff_norm() * g.derivative().coeff_norm();
    if h.coeff_norm() <= DEGENERATE_PAIR_TOL * scale || scale == 0.0 {
        return Ok(BuRoots::Degenerate);
    }
    let Some(roots) = antiperiodic_roots(&h, samples, tol) else {
        return Ok(BuRoots::Degenerate);
    };
    let dfp = f.derivative();
    let dgp = g.derivative();
    let deriv_scale = dfp.coeff_norm() + dgp.coeff_norm();
    let mut out = Vec::with_capacity(roots.len());
    for phi in roots {
        let rows = [
            (dfp.eval(phi), dgp.eval(phi)),
            (dfp.eval(phi + PI), dgp.eval(phi + PI)),
        ];
        let best = if rows[0].0.hypot(rows[0].1) >= rows[1].0.hypot(rows[1].1) {
            rows[0]
        } else {
            rows[1]
        };
        if best.0.hypot(best.1) <= 1e-9 * deriv_scale {
            // Both rows vanish: the kernel direction is not determined.
            return Ok(BuRoots::Degenerate);
        }
        let direction = ProjectiveReal::new(best.1, -best.0)
            .expect("row norm was checked above");
        out.push(BuRoot { phi, direction });
    }
    Ok(BuRoots::Roots(out))
}

/// Default sampling density for [`bu_parity`] and the report suites.
pub fn default_bu_samples(f: &TrigPolynomial, g: &TrigPolynomial) -> usize {
    (16 * (f.degree() + g.degree())).max(64)
}

/// Parity of the certified count. `Even` cannot occur for honest certified
/// counts of an antiperiodic determinant; it is reported if it ever shows
/// up so the claim is falsifiable.
pub fn bu_parity(f: &TrigPolynomial, g: &TrigPolynomial) -> Result<Parity, AnalyticError> {
    match bu_roots(f, g, default_bu_samples(f, g), 1e-10)? {
        BuRoots::Degenerate => Ok(Parity::Degenerate),
        BuRoots::Roots(roots) => {
            Ok(if roots.len() % 2 == 1 { Parity::Odd } else { Parity::Even })
        }
    }
}

// ---------------------------------------------------------------------------
// Zeros of the cosine section over the Klein cycle
// ---------------------------------------------------------------------------

/// Result of intersecting the section defined by `f` with the zero section
/// over the cycle of antipodal-pair algebras.
#[derive(Clone, Debug)]
pub enum SectionZeros {
    /// `f(phi) = f(phi + pi)` identically (constants and other
    /// pi-periodic functions), or a zero could not be certified.
    Degenerate,
    /// Certified zeros `(phi, alpha)` with `phi` in `[0, pi)`: the
    /// algebras `gimel(phi, phi + pi; alpha)` containing `f`.
    Zeros(Vec<(f64, ProjectiveReal)>),
}

/// All points of the antipodal-pair cycle whose algebra contains `f`:
/// certified roots of `f(phi) - f(phi + pi)` with the induced projective
/// derivative ratio `alpha = (f'(phi) : f'(phi + pi))` at each.
pub fn section_zeros_on_klein_cycle(f: &TrigPolynomial, grid: usize, tol: f64) -> SectionZeros {
    let s = f.sub(&f.shift_half_turn());
    if s.coeff_norm() <= DEGENERATE_PAIR_TOL * f.coeff_norm().max(1e-300) {
        return SectionZeros::Degenerate;
    }
    let samples = grid.max((8 * f.degree()).max(8));
    let Some(roots) = antiperiodic_roots(&s, samples, tol) else {
        return SectionZeros::Degenerate;
    };
    let df = f.derivative();
    let scale = df.coeff_norm().max(1e-300);
    let mut out = Vec::with_capacity(roots.len());
    for phi in roots {
        let (p, q) = (df.eval(phi), df.eval(phi + PI));
        if p.hypot(q) <= 1e-9 * scale {
            // Both derivatives vanish: alpha is not determined there.
            return SectionZeros::Degenerate;
        }
        out.push((phi, ProjectiveReal::new(p, q).expect("nonzero by the check above")));
    }
    SectionZeros::Zeros(out)
}

// ---------------------------------------------------------------------------
// Monodromy of transported functional frames
// ---------------------------------------------------------------------------

/// Which loop of subalgebras the frame is transported along.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FrameLoop {
    /// The rank-1 diameter loop with the single functional
    /// `f -> f(phi + pi) - f(phi)`.
    Cd1Diameters,
    /// The antipodal double-derivative loop with the frame
    /// `(f -> f'(phi), f -> f'(phi + pi))`.
    GammaInfFrame,
}

/// Evaluation functionals are represented by their values on a fixed test
/// basis of low harmonics; transporting a frame means following these
/// finite vectors along the loop.
const TEST_BASIS_DEGREE: usize = 3;

fn test_basis() -> Vec<TrigPolynomial> {
    let mut basis = Vec::new();
    for k in 1..=TEST_BASIS_DEGREE {
        basis.push(TrigPolynomial::cos(k));
        basis.push(TrigPolynomial::sin(k));
    }
    basis
}

fn frame_at(frame: FrameLoop, basis: &[TrigPolynomial], t: f64) -> Vec<Vec<f64>> {
    match frame {
        FrameLoop::Cd1Diameters => {
            vec![basis.iter().map(|b| b.eval(t + PI) - b.eval(t)).collect()]
        }
        FrameLoop::GammaInfFrame => {
            let derivatives: Vec<TrigPolynomial> = basis.iter().map(TrigPolynomial::derivative).collect();
            vec![
                derivatives.iter().map(|d| d.eval(t)).collect(),
                derivatives.iter().map(|d| d.eval(t + PI)).collect(),
            ]
        }
    }
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Transports the frame along `phi: 0 -> windings * pi` in `steps` equal
/// steps and returns the sign of the holonomy determinant: `-1` when the
/// transported frame returns orientation-reversed. The walk is validated at
/// every step: each frame vector must move unambiguously (closer to its own
/// predecessor than to any other frame member or its negative), otherwise
/// the step count is rejected.
pub fn monodromy_sign(
    frame: FrameLoop,
    steps: usize,
    windings: u32,
) -> Result<i32, AnalyticError> {
    let min_steps = 16 * windings.max(1) as usize;
    if steps < min_steps {
        return Err(AnalyticError::TooFewSteps(steps));
    }
    let basis = test_basis();
    let total = windings.max(1) as f64 * PI;
    let step = total / steps as f64;
    let initial = frame_at(frame, &basis, 0.0);
    let mut prev = initial.clone();
    for j in 1..=steps {
        let cur = frame_at(frame, &basis, j as f64 * step);
        for (i, v) in cur.iter().enumerate() {
            let own = dist(v, &prev[i]);
            // No sign flip within a single step.
            let mut flipped = prev[i].clone();
            for x in &mut flipped {
                *x = -*x;
            }
            if own >= dist(v, &flipped) {
                return Err(AnalyticError::AmbiguousTransport { steps });
            }
            // No label swap within a single step.
            for (m, w) in prev.iter().enumerate() {
                if m != i && own >= dist(v, w) {
                    return Err(AnalyticError::AmbiguousTransport { steps });
                }
            }
        }
        prev = cur;
    }
    // Express the final frame in the initial one: solve I H = F in the
    // least-squares sense via the (tiny) normal equations.
    let m = initial.len();
    let gram = |a: &[Vec<f64>], b: &[Vec<f64>]| -> Vec<Vec<f64>> {
        a.iter()
            .map(|x| b.iter().map(|y| x.iter().zip(y).map(|(p, q)| p * q).sum()).collect())
            .collect()
    };
    let gii = gram(&initial, &initial);
    let gif = gram(&initial, &prev);
    let holonomy_det = match m {
        1 => gif[0][0] / gii[0][0],
        2 => {
            let det_gii = gii[0][0] * gii[1][1] - gii[0][1] * gii[1][0];
            let det_gif = gif[0][0] * gif[1][1] - gif[0][1] * gif[1][0];
            det_gif / det_gii
        }
        _ => unreachable!("frames here have one or two members"),
    };
    // The transported frame must still span the same space with a clearly
    // nonzero determinant; anything else means the walk degenerated.
    if !holonomy_det.is_finite() || holonomy_det.abs() < 1e-6 {
        return Err(AnalyticError::AmbiguousTransport { steps });
    }
    Ok(if holonomy_det > 0.0 { 1 } else { -1 })
}

// ---------------------------------------------------------------------------
// The degree-one trivialization determinant
// ---------------------------------------------------------------------------

/// The absolute determinant of the two-chord condition matrix on the space
/// `lambda_1 cos + lambda_2 sin`: rows `(cos a_i - cos b_i, sin a_i - sin b_i)`
/// per chord. A nonzero value certifies that no nonzero degree-one function
/// satisfies both chord conditions, i.e. the pair trivializes the rank-2
/// bundle there. The value is invariant under swapping the chords and under
/// swapping endpoints within a chord.
pub fn fourier1_trivialization_check(c1: &Chord, c2: &Chord) -> f64 {
    let row = |c: &Chord| -> (f64, f64) {
        let (a, b) = c.endpoints();
        (a.angle().cos() - b.angle().cos(), a.angle().sin() - b.angle().sin())
    };
    let (r1, r2) = (row(c1), row(c2));
    (r1.0 * r2.1 - r1.1 * r2.0).abs()
}

// ---------------------------------------------------------------------------
// Map triples and evaluation matrices
// ---------------------------------------------------------------------------

/// A smooth map of the circle to 3-space: three trigonometric polynomials.
#[derive(Clone, Debug, PartialEq)]
pub struct MapTriple {
    pub components: [TrigPolynomial; 3],
}

impl MapTriple {
    pub fn new(components: [TrigPolynomial; 3]) -> Self {
        Self { components }
    }

    pub fn zero() -> Self {
        Self::new([TrigPolynomial::zero(), TrigPolynomial::zero(), TrigPolynomial::zero()])
    }

    pub fn random(rng: &mut SplitMix64, degree: usize) -> Self {
        Self::new([
            TrigPolynomial::random(rng, degree),
            TrigPolynomial::random(rng, degree),
            TrigPolynomial::random(rng, degree),
        ])
    }

    pub fn scale_add(&self, c: f64, other: &MapTriple) -> MapTriple {
        Self::new([
            self.components[0].add(&other.components[0].scale(c)),
            self.components[1].add(&other.components[1].scale(c)),
            self.components[2].add(&other.components[2].scale(c)),
        ])
    }

    fn max_degree(&self) -> usize {
        self.components.iter().map(TrigPolynomial::degree).max().unwrap_or(0)
    }

    fn coefficient_vector(&self, degree: usize) -> Vec<f64> {
        let mut v = Vec::with_capacity(3 * (1 + 2 * degree));
        for c in &self.components {
            v.push(c.a0());
            for k in 1..=degree {
                let (a, b) = c.harmonic_at(k);
                v.push(a);
                v.push(b);
            }
        }
        v
    }
}

/// A finite-dimensional space of maps to 3-space, given by a basis whose
/// numerical independence is certified at construction.
#[derive(Clone, Debug)]
pub struct FunctionSubspace {
    basis: Vec<MapTriple>,
}

impl FunctionSubspace {
    /// Smallest acceptable `sigma_min / sigma_max` of the stacked basis
    /// coefficients (the Gram condition check, in singular-value form).
    const INDEPENDENCE_TOL: f64 = 1e-8;

    pub fn new(basis: Vec<MapTriple>) -> Result<Self, AnalyticError> {
        let degree = basis.iter().map(MapTriple::max_degree).max().unwrap_or(0);
        let rows: Vec<Vec<f64>> = basis.iter().map(|t| t.coefficient_vector(degree)).collect();
        let sigma = singular_values(&Mat::from_rows(rows));
        let ratio = match (sigma.first(), sigma.last()) {
            (Some(&max), Some(&min)) if max > 0.0 => min / max,
            _ => 0.0,
        };
        if basis.is_empty() || ratio <= Self::INDEPENDENCE_TOL {
            return Err(AnalyticError::DependentBasis { ratio });
        }
        Ok(Self { basis })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[MapTriple] {
        &self.basis
    }

    /// A seeded random subspace of the given dimension and harmonic degree.
    pub fn random(rng: &mut SplitMix64, dim: usize, degree: usize) -> Self {
        loop {
            let basis = (0..dim).map(|_| MapTriple::random(rng, degree)).collect();
            if let Ok(space) = Self::new(basis) {
                return space;
            }
        }
    }

    /// The six-dimensional space of maps whose components are homogeneous
    /// degree-one harmonics; the trivializing space of the cup-square
    /// argument.
    pub fn degree_one_triples() -> Self {
        let mut basis = Vec::with_capacity(6);
        for c in 0..3 {
            for f in [TrigPolynomial::cos(1), TrigPolynomial::sin(1)] {
                let mut t = MapTriple::zero();
                t.components[c] = f;
                basis.push(t);
            }
        }
        Self::new(basis).expect("the harmonic basis is orthogonal")
    }

    /// The subspace spanned by `coeffs * basis` (rows of `coeffs` give the
    /// new basis in terms of the old). Used to check that scans depend only
    /// on the subspace, not on the presented basis.
    pub fn recombine(&self, coeffs: &[Vec<f64>]) -> Result<Self, AnalyticError> {
        let basis = coeffs
            .iter()
            .map(|row| {
                assert_eq!(row.len(), self.basis.len(), "recombination shape mismatch");
                row.iter()
                    .zip(&self.basis)
                    .fold(MapTriple::zero(), |acc, (&c, t)| acc.scale_add(c, t))
            })
            .collect();
        Self::new(basis)
    }
}

/// The `6 x dim` matrix of chord conditions on a subspace of maps: row
/// `(chord i, component c)`, column `j`, holds
/// `basis_j.component_c(a_i) - basis_j.component_c(b_i)`.
pub fn evaluation_matrix(c1: &Chord, c2: &Chord, space: &FunctionSubspace) -> Mat {
    let mut m = Mat::zeros(6, space.dim());
    for (ci, chord) in [c1, c2].into_iter().enumerate() {
        let (a, b) = chord.endpoints();
        for comp in 0..3 {
            for (j, t) in space.basis().iter().enumerate() {
                let f = &t.components[comp];
                m.set(3 * ci + comp, j, f.eval(a.angle()) - f.eval(b.angle()));
            }
        }
    }
    m
}

// ---------------------------------------------------------------------------
// Degeneracy scan
// ---------------------------------------------------------------------------

/// One connected component of flagged grid cells (4-dimensional grid
/// adjacency, axes periodic).
#[derive(Clone, Debug, Serialize)]
pub struct ScanComponent {
    pub cells: usize,
    /// Extent in grid steps covered along each of the four angle axes
    /// (minimal circular cover minus one).
    pub extent: [usize; 4],
}

impl ScanComponent {
    /// How many axes the component spans by at least `steps` grid steps.
    pub fn axes_spanning(&self, steps: usize) -> usize {
        self.extent.iter().filter(|&&e| e >= steps).count()
    }
}

/// Result of scanning chord-pair space for rank drops of the evaluation
/// matrix.
#[derive(Clone, Debug, Serialize)]
pub struct ScanReport {
    pub grid: usize,
    pub tol: f64,
    /// Cells actually evaluated (excludes invalid and near-coincident
    /// chord pairs).
    pub scanned: usize,
    /// Grid indices `(i, j, k, l)` for chord pair
    /// `((theta_i, theta_j), (theta_k, theta_l))` with
    /// `sigma_6 < tol * sigma_1`.
    pub flagged: Vec<[usize; 4]>,
    /// Connected components of the flagged set, largest first.
    pub components: Vec<ScanComponent>,
}

impl ScanReport {
    pub fn is_nonempty(&self) -> bool {
        !self.flagged.is_empty()
    }

    /// Whether some component spans at least `steps` grid steps in at
    /// least `axes` independent parameters: the sampled-scale stand-in for
    /// "the degeneracy locus has dimension >= axes".
    pub fn has_component_spanning(&self, steps: usize, axes: usize) -> bool {
        self.components.iter().any(|c| c.axes_spanning(steps) >= axes)
    }
}

/// Default relative threshold on `sigma_6 / sigma_1` below which a grid
/// cell counts as degenerate. Grid sampling sees the rank-drop locus only
/// from a cell-sized distance, so the threshold is necessarily of grid
/// scale, far above working precision; with it the flagged set stays a
/// few percent of the cells. `--tol` overrides it.
pub const SCAN_DEFAULT_TOL: f64 = 0.03;
/// Default grid side for the scan.
pub const SCAN_DEFAULT_GRID: usize = 16;

const SCAN_MIN_GRID: usize = 12;

fn circular_index_distance(a: usize, b: usize, n: usize) -> usize {
    let d = a.abs_diff(b);
    d.min(n - d)
}

/// Scans the 4-parameter space of chord pairs on an offset `grid^4` lattice
/// and flags cells where the smallest singular value of the 6 x 7
/// evaluation matrix drops below `tol` times the largest. Pairs whose two
/// chords (almost) coincide are excluded: a repeated chord drops rank for
/// trivial reasons and would flood the scan with a fake locus.
pub fn degeneracy_scan(
    space: &FunctionSubspace,
    grid: usize,
    tol: f64,
) -> Result<ScanReport, AnalyticError> {
    if space.dim() != 7 {
        return Err(AnalyticError::BadSubspaceDimension(space.dim()));
    }
    if grid < SCAN_MIN_GRID {
        return Err(AnalyticError::GridTooSmall { min: SCAN_MIN_GRID, got: grid });
    }
    let angles: Vec<f64> = (0..grid).map(|i| (i as f64 + 0.5) * TAU / grid as f64).collect();
    // All evaluations the matrices will ever need, precomputed per angle.
    // values[j][comp][i] = basis_j.component_comp(theta_i).
    let values: Vec<[Vec<f64>; 3]> = space
        .basis()
        .iter()
        .map(|t| {
            [0, 1, 2].map(|c| angles.iter().map(|&th| t.components[c].eval(th)).collect())
        })
        .collect();

    // A pair is scanned only if both chords are nondegenerate and the two
    // chords differ by more than one grid step under the best endpoint
    // matching.
    let pair_ok = |i: usize, j: usize, k: usize, l: usize| -> bool {
        if i == j || k == l {
            return false;
        }
        let d = |a: usize, b: usize| circular_index_distance(a, b, grid);
        let direct = d(i, k).max(d(j, l));
        let swapped = d(i, l).max(d(j, k));
        direct.min(swapped) > 1
    };

    let scan_rows = |range: std::ops::Range<usize>| -> (usize, Vec<[usize; 4]>) {
        let mut scanned = 0;
        let mut flagged = Vec::new();
        let mut m = Mat::zeros(6, 7);
        for i in range {
            for j in 0..grid {
                for k in 0..grid {
                    for l in 0..grid {
                        if !pair_ok(i, j, k, l) {
                            continue;
                        }
                        scanned += 1;
                        for (col, v) in values.iter().enumerate() {
                            for (comp, vc) in v.iter().enumerate() {
                                m.set(comp, col, vc[i] - vc[j]);
                                m.set(3 + comp, col, vc[k] - vc[l]);
                            }
                        }
                        let sigma = singular_values(&m);
                        if sigma[5] < tol * sigma[0] {
                            flagged.push([i, j, k, l]);
                        }
                    }
                }
            }
        }
        (scanned, flagged)
    };

    // Embarrassingly parallel over the first axis; the chunk results are
    // merged in axis order so the report never depends on scheduling.
    let workers = std::thread::available_parallelism().map_or(1, usize::from).min(grid);
    let chunk = grid.div_ceil(workers);
    let results: Vec<(usize, Vec<[usize; 4]>)> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let lo = w * chunk;
                let hi = ((w + 1) * chunk).min(grid);
                let scan = &scan_rows;
                scope.spawn(move || scan(lo..hi))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("scan worker panicked")).collect()
    });
    let mut scanned = 0;
    let mut flagged = Vec::new();
    for (s, f) in results {
        scanned += s;
        flagged.extend(f);
    }

    let components = connected_components(&flagged, grid);
    Ok(ScanReport { grid, tol, scanned, flagged, components })
}

fn connected_components(flagged: &[[usize; 4]], grid: usize) -> Vec<ScanComponent> {
    use std::collections::HashMap;
    let index: HashMap<[usize; 4], usize> =
        flagged.iter().enumerate().map(|(n, &c)| (c, n)).collect();
    let mut seen = vec![false; flagged.len()];
    let mut components = Vec::new();
    for start in 0..flagged.len() {
        if seen[start] {
            continue;
        }
        let mut members = Vec::new();
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(n) = stack.pop() {
            members.push(flagged[n]);
            let cell = flagged[n];
            for axis in 0..4 {
                for dir in [1usize, grid - 1] {
                    let mut neighbor = cell;
                    neighbor[axis] = (cell[axis] + dir) % grid;
                    if let Some(&m) = index.get(&neighbor) {
                        if !seen[m] {
                            seen[m] = true;
                            stack.push(m);
                        }
                    }
                }
            }
        }
        let extent = [0, 1, 2, 3].map(|axis| {
            let mut indices: Vec<usize> = members.iter().map(|c| c[axis]).collect();
            indices.sort_unstable();
            indices.dedup();
            if indices.len() <= 1 {
                return 0;
            }
            // Minimal circular cover: full circle minus the largest gap.
            let mut max_gap = grid - indices[indices.len() - 1] + indices[0];
            for w in indices.windows(2) {
                max_gap = max_gap.max(w[1] - w[0]);
            }
            grid - max_gap
        });
        components.push(ScanComponent { cells: members.len(), extent });
    }
    components.sort_by(|a, b| b.cells.cmp(&a.cells).then(b.extent.cmp(&a.extent)));
    components
}
