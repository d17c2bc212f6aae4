//! Cellular chain complexes over GF(2).
//!
//! Cells are named, graded by dimension, and carry mod-2 boundary incidence
//! sets: a boundary is literally the set of cells that appear with odd
//! coefficient, so chain addition is symmetric difference. The module
//! validates `boundary of boundary = 0`, computes Betti numbers, answers
//! cycle/boundary/homologous queries and produces canonical homology
//! generators.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::f2::{BitMatrix, BitVec, Span};

#[derive(Debug, Error)]
pub enum ChainError {
    #[error("duplicate cell id `{0}`")]
    DuplicateCell(String),
    #[error("boundary listed for unknown cell `{0}`")]
    BoundaryForUnknownCell(String),
    #[error("duplicate entry `{entry}` in the boundary of `{cell}`")]
    DuplicateBoundaryEntry { cell: String, entry: String },
    #[error("unknown cell `{0}`")]
    UnknownCell(String),
    #[error("cell `{cell}` has dimension {got}, chain has dimension {expected}")]
    ChainDimMismatch { cell: String, expected: usize, got: usize },
    #[error("dimension {0} out of range")]
    DimOutOfRange(usize),
    #[error("chain is not a cycle")]
    NotACycle,
    #[error("complex is invalid:\n{0}")]
    Invalid(ValidationReport),
    #[error("bad complex JSON: {0}")]
    Json(String),
}

/// A mod-2 chain: a set of same-dimension cells.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Chain {
    pub dim: usize,
    pub support: BTreeSet<String>,
}

impl Chain {
    pub fn new<I, S>(dim: usize, cells: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self { dim, support: cells.into_iter().map(Into::into).collect() }
    }

    pub fn empty(dim: usize) -> Self {
        Self { dim, support: BTreeSet::new() }
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    /// Mod-2 sum: symmetric difference of supports.
    pub fn xor(&self, other: &Chain) -> Chain {
        let support = self.support.symmetric_difference(&other.support).cloned().collect();
        Chain { dim: self.dim, support }
    }
}

impl fmt::Display for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.support.is_empty() {
            return write!(f, "0");
        }
        let names: Vec<&str> = self.support.iter().map(String::as_str).collect();
        write!(f, "{}", names.join(" + "))
    }
}

/// One structural defect found by [`ChainComplex::validate`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Violation {
    /// `cell`'s boundary names a cell that does not exist.
    MissingBoundaryCell { cell: String, missing: String },
    /// `cell`'s boundary names a cell whose dimension is not one lower.
    WrongBoundaryDimension { cell: String, neighbor: String, expected: usize, got: usize },
    /// The composite boundary of `cell` is nonzero; `residue` is what failed
    /// to cancel.
    BoundarySquareNonzero { cell: String, residue: Vec<String> },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::MissingBoundaryCell { cell, missing } => {
                write!(f, "boundary of `{cell}` names missing cell `{missing}`")
            }
            Violation::WrongBoundaryDimension { cell, neighbor, expected, got } => write!(
                f,
                "boundary of `{cell}` names `{neighbor}` of dimension {got}, expected {expected}"
            ),
            Violation::BoundarySquareNonzero { cell, residue } => {
                write!(f, "dd({cell}) = {} != 0", residue.join(" + "))
            }
        }
    }
}

/// All defects of a complex; empty means the complex is valid.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return write!(f, "ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct CellJson {
    id: String,
    dim: usize,
}

#[derive(Serialize, Deserialize)]
struct ComplexJson {
    name: String,
    cells: Vec<CellJson>,
    #[serde(default)]
    boundary: BTreeMap<String, Vec<String>>,
}

/// A finite cell complex over GF(2): named cells by dimension plus boundary
/// incidence sets. Construction only checks naming consistency; the
/// homological invariant `dd = 0` is checked by [`Self::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    name: String,
    cells_by_dim: Vec<Vec<String>>,
    dim_of: BTreeMap<String, usize>,
    index_in_dim: BTreeMap<String, usize>,
    boundary: BTreeMap<String, BTreeSet<String>>,
}

impl ChainComplex {
    /// Builds a complex from `(id, dim)` cells and per-cell boundary lists.
    /// Cells keep their listed order inside each dimension, which fixes all
    /// matrix layouts and hence all deterministic outputs.
    pub fn build<S: Into<String>>(
        name: S,
        cells: Vec<(String, usize)>,
        boundary: Vec<(String, Vec<String>)>,
    ) -> Result<Self, ChainError> {
        let top = cells.iter().map(|&(_, d)| d).max();
        let mut cells_by_dim = vec![Vec::new(); top.map_or(0, |t| t + 1)];
        let mut dim_of = BTreeMap::new();
        let mut index_in_dim = BTreeMap::new();
        for (id, dim) in cells {
            if dim_of.contains_key(&id) {
                return Err(ChainError::DuplicateCell(id));
            }
            index_in_dim.insert(id.clone(), cells_by_dim[dim].len());
            cells_by_dim[dim].push(id.clone());
            dim_of.insert(id, dim);
        }
        let mut bmap: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
        for (cell, faces) in boundary {
            if !dim_of.contains_key(&cell) {
                return Err(ChainError::BoundaryForUnknownCell(cell));
            }
            let entry = bmap.entry(cell.clone()).or_default();
            for face in faces {
                if !entry.insert(face.clone()) {
                    return Err(ChainError::DuplicateBoundaryEntry { cell, entry: face });
                }
            }
        }
        Ok(Self { name: name.into(), cells_by_dim, dim_of, index_in_dim, boundary: bmap })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Largest dimension carrying cells, or `None` for the empty complex.
    pub fn top_dim(&self) -> Option<usize> {
        self.cells_by_dim.iter().rposition(|cells| !cells.is_empty())
    }

    pub fn cells(&self, dim: usize) -> &[String] {
        self.cells_by_dim.get(dim).map_or(&[], Vec::as_slice)
    }

    /// Cell counts per dimension, `0..=top_dim`.
    pub fn cell_counts(&self) -> Vec<usize> {
        match self.top_dim() {
            None => Vec::new(),
            Some(top) => (0..=top).map(|d| self.cells(d).len()).collect(),
        }
    }

    pub fn dim_of(&self, cell: &str) -> Option<usize> {
        self.dim_of.get(cell).copied()
    }

    /// The boundary incidence set of one cell (empty if unlisted).
    pub fn boundary_of(&self, cell: &str) -> Result<&BTreeSet<String>, ChainError> {
        static EMPTY: BTreeSet<String> = BTreeSet::new();
        if !self.dim_of.contains_key(cell) {
            return Err(ChainError::UnknownCell(cell.to_string()));
        }
        Ok(self.boundary.get(cell).unwrap_or(&EMPTY))
    }

    /// Checks both structural invariants (boundary cells exist, one
    /// dimension down) and `dd = 0` in every degree. All violations are
    /// reported; nothing aborts early.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        for (cell, faces) in &self.boundary {
            let dim = self.dim_of[cell];
            for face in faces {
                match self.dim_of.get(face) {
                    None => report.violations.push(Violation::MissingBoundaryCell {
                        cell: cell.clone(),
                        missing: face.clone(),
                    }),
                    Some(&fd) if dim == 0 || fd != dim - 1 => {
                        report.violations.push(Violation::WrongBoundaryDimension {
                            cell: cell.clone(),
                            neighbor: face.clone(),
                            expected: dim.saturating_sub(1),
                            got: fd,
                        })
                    }
                    Some(_) => {}
                }
            }
        }
        if !report.is_ok() {
            // dd is only meaningful on structurally sound data.
            return report;
        }
        for (dim, cells) in self.cells_by_dim.iter().enumerate() {
            if dim < 2 {
                continue;
            }
            for cell in cells {
                let mut residue: BTreeSet<String> = BTreeSet::new();
                for face in self.boundary.get(cell).into_iter().flatten() {
                    for ff in self.boundary.get(face).into_iter().flatten() {
                        if !residue.remove(ff) {
                            residue.insert(ff.clone());
                        }
                    }
                }
                if !residue.is_empty() {
                    report.violations.push(Violation::BoundarySquareNonzero {
                        cell: cell.clone(),
                        residue: residue.into_iter().collect(),
                    });
                }
            }
        }
        report
    }

    fn ensure_valid(&self) -> Result<(), ChainError> {
        let report = self.validate();
        if report.is_ok() {
            Ok(())
        } else {
            Err(ChainError::Invalid(report))
        }
    }

    /// The matrix of the boundary operator from dimension `k` to `k - 1`:
    /// rows are `(k-1)`-cells, columns are `k`-cells, both in listed order.
    pub fn boundary_matrix(&self, k: usize) -> Result<BitMatrix, ChainError> {
        let top = self.top_dim().ok_or(ChainError::DimOutOfRange(k))?;
        if k == 0 || k > top {
            return Err(ChainError::DimOutOfRange(k));
        }
        let rows = self.cells(k - 1);
        let cols = self.cells(k);
        let mut m = BitMatrix::zeros(rows.len(), cols.len());
        for (j, cell) in cols.iter().enumerate() {
            for face in self.boundary.get(cell).into_iter().flatten() {
                match self.dim_of.get(face) {
                    Some(&d) if d == k - 1 => {}
                    Some(&d) => {
                        return Err(ChainError::ChainDimMismatch {
                            cell: face.clone(),
                            expected: k - 1,
                            got: d,
                        })
                    }
                    None => return Err(ChainError::UnknownCell(face.clone())),
                }
                m.set(self.index_in_dim[face], j, true);
            }
        }
        Ok(m)
    }

    fn boundary_rank(&self, k: usize) -> usize {
        match self.boundary_matrix(k) {
            Ok(m) => m.rank(),
            Err(_) => 0,
        }
    }

    /// Mod-2 Betti numbers indexed by dimension, `0..=top_dim`.
    /// Requires a valid complex.
    pub fn betti(&self) -> Result<Vec<usize>, ChainError> {
        self.ensure_valid()?;
        let Some(top) = self.top_dim() else {
            return Ok(Vec::new());
        };
        Ok((0..=top)
            .map(|k| self.cells(k).len() - self.boundary_rank(k) - self.boundary_rank(k + 1))
            .collect())
    }

    /// Alternating sum of cell counts.
    pub fn euler_characteristic(&self) -> i64 {
        self.cells_by_dim
            .iter()
            .enumerate()
            .map(|(d, cells)| {
                let n = cells.len() as i64;
                if d % 2 == 0 {
                    n
                } else {
                    -n
                }
            })
            .sum()
    }

    fn check_chain(&self, z: &Chain) -> Result<(), ChainError> {
        for cell in &z.support {
            match self.dim_of.get(cell) {
                None => return Err(ChainError::UnknownCell(cell.clone())),
                Some(&d) if d != z.dim => {
                    return Err(ChainError::ChainDimMismatch {
                        cell: cell.clone(),
                        expected: z.dim,
                        got: d,
                    })
                }
                Some(_) => {}
            }
        }
        Ok(())
    }

    /// The mod-2 boundary of a chain.
    pub fn boundary_of_chain(&self, z: &Chain) -> Result<Chain, ChainError> {
        self.check_chain(z)?;
        let mut support: BTreeSet<String> = BTreeSet::new();
        for cell in &z.support {
            for face in self.boundary.get(cell).into_iter().flatten() {
                if !support.remove(face) {
                    support.insert(face.clone());
                }
            }
        }
        Ok(Chain { dim: z.dim.saturating_sub(1), support })
    }

    pub fn is_cycle(&self, z: &Chain) -> Result<bool, ChainError> {
        Ok(self.boundary_of_chain(z)?.is_empty())
    }

    fn chain_to_vec(&self, z: &Chain) -> BitVec {
        let cells = self.cells(z.dim);
        let mut v = BitVec::zeros(cells.len());
        for cell in &z.support {
            v.set(self.index_in_dim[cell], true);
        }
        v
    }

    fn vec_to_chain(&self, dim: usize, v: &BitVec) -> Chain {
        let cells = self.cells(dim);
        Chain { dim, support: v.ones().map(|i| cells[i].clone()).collect() }
    }

    /// True when the cycle `z` bounds, i.e. lies in the image of the
    /// boundary operator one dimension up. Errors on non-cycles.
    pub fn is_boundary(&self, z: &Chain) -> Result<bool, ChainError> {
        Ok(self.boundary_preimage(z)?.is_some())
    }

    /// A chain `w` with boundary `z`, when one exists. Among all preimages
    /// the one of minimal support is returned (ties broken by cell names),
    /// so reported witnesses are stable and readable.
    pub fn boundary_preimage(&self, z: &Chain) -> Result<Option<Chain>, ChainError> {
        if !self.is_cycle(z)? {
            return Err(ChainError::NotACycle);
        }
        let top = match self.top_dim() {
            None => return Ok(Some(Chain::empty(0))),
            Some(top) => top,
        };
        if z.dim >= top {
            // No cells above: only the empty chain bounds.
            return Ok(z.is_empty().then(|| Chain::empty(z.dim + 1)));
        }
        let m = self.boundary_matrix(z.dim + 1)?;
        let b = self.chain_to_vec(z);
        let Some(x) = m.solve(&b).expect("vector built to match the matrix") else {
            return Ok(None);
        };
        let kernel = m.kernel_basis();
        let best = minimize_support(&x, &kernel, |v| self.vec_to_chain(z.dim + 1, v));
        Ok(Some(best))
    }

    /// Whether two cycles differ by a boundary.
    pub fn homologous(&self, z1: &Chain, z2: &Chain) -> Result<bool, ChainError> {
        if !self.is_cycle(z1)? || !self.is_cycle(z2)? {
            return Err(ChainError::NotACycle);
        }
        self.is_boundary(&z1.xor(z2))
    }

    /// Cycles whose classes form a basis of the degree-`k` mod-2 homology.
    /// Representatives are canonical: minimal support first, then cell-name
    /// order. Requires a valid complex.
    pub fn homology_basis(&self, k: usize) -> Result<Vec<Chain>, ChainError> {
        self.ensure_valid()?;
        let top = self.top_dim().ok_or(ChainError::DimOutOfRange(k))?;
        if k > top {
            return Err(ChainError::DimOutOfRange(k));
        }
        let n = self.cells(k).len();
        let kernel: Vec<BitVec> = if k == 0 {
            (0..n)
                .map(|i| {
                    let mut v = BitVec::zeros(n);
                    v.set(i, true);
                    v
                })
                .collect()
        } else {
            self.boundary_matrix(k)?.kernel_basis()
        };
        let image: Vec<BitVec> = if k == top {
            Vec::new()
        } else {
            let mt = self.boundary_matrix(k + 1)?.transpose();
            (0..mt.rows()).map(|j| mt.row(j)).collect()
        };
        let image_span = Span::with_vectors(&image);
        let betti = kernel.len() - image_span.rank();
        // Canonical order: minimal support first, ties broken by cell names.
        let mut candidates: Vec<(Chain, BitVec)> = candidate_cycles(&kernel)
            .into_iter()
            .map(|v| (self.vec_to_chain(k, &v), v))
            .collect();
        candidates.sort_by(|(a, _), (b, _)| {
            a.support.len().cmp(&b.support.len()).then_with(|| a.support.cmp(&b.support))
        });
        let mut reps = Vec::new();
        let mut span = image_span;
        for (chain, v) in candidates {
            if reps.len() == betti {
                break;
            }
            if span.insert(&v) {
                reps.push(chain);
            }
        }
        Ok(reps)
    }

    pub fn to_json_string(&self) -> String {
        let cells = match self.top_dim() {
            None => Vec::new(),
            Some(top) => (0..=top)
                .flat_map(|d| self.cells(d).iter().map(move |id| CellJson { id: id.clone(), dim: d }))
                .collect(),
        };
        let boundary = self
            .boundary
            .iter()
            .filter(|(_, faces)| !faces.is_empty())
            .map(|(cell, faces)| (cell.clone(), faces.iter().cloned().collect()))
            .collect();
        let json = ComplexJson { name: self.name.clone(), cells, boundary };
        serde_json::to_string_pretty(&json).expect("complex serialization cannot fail")
    }

    pub fn from_json_str(s: &str) -> Result<Self, ChainError> {
        let json: ComplexJson = serde_json::from_str(s).map_err(|e| ChainError::Json(e.to_string()))?;
        Self::build(
            json.name,
            json.cells.into_iter().map(|c| (c.id, c.dim)).collect(),
            json.boundary.into_iter().collect(),
        )
    }
}

/// Enumerates the nonzero kernel elements. Exhaustive for kernels of
/// dimension at most 16, which covers everything this crate ever touches;
/// larger kernels fall back to the basis itself.
fn candidate_cycles(kernel: &[BitVec]) -> Vec<BitVec> {
    if kernel.is_empty() {
        return Vec::new();
    }
    if kernel.len() > 16 {
        return kernel.to_vec();
    }
    let n = kernel[0].len();
    (1u32..(1 << kernel.len()))
        .map(|mask| {
            let mut v = BitVec::zeros(n);
            for (i, basis_vec) in kernel.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    v.xor_assign(basis_vec);
                }
            }
            v
        })
        .collect()
}

/// The minimal-support representative of `x` modulo the span of `kernel`,
/// with ties broken by the rendered chain (cell-name order).
fn minimize_support(x: &BitVec, kernel: &[BitVec], render: impl Fn(&BitVec) -> Chain) -> Chain {
    let mut best = render(x);
    if kernel.len() > 16 {
        return best;
    }
    for mask in 1u32..(1 << kernel.len()) {
        let mut v = x.clone();
        for (i, basis_vec) in kernel.iter().enumerate() {
            if mask >> i & 1 == 1 {
                v.xor_assign(basis_vec);
            }
        }
        let cand = render(&v);
        let better = (cand.support.len(), cand.support.iter().collect::<Vec<_>>())
            < (best.support.len(), best.support.iter().collect::<Vec<_>>());
        if better {
            best = cand;
        }
    }
    best
}
