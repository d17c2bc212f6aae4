//! Cross-cutting invariants: algebraic identities checked by proptest and
//! the brute-force homology oracle run against randomly generated chain
//! complexes.

use std::collections::{BTreeSet, HashSet};

use proptest::prelude::*;

use cdlab::chain::{Chain, ChainComplex};
use cdlab::chord::{same_point, Chord, ChordDiagram};
use cdlab::f2::{BitMatrix, BitVec};
use cdlab::rng::SplitMix64;
use cdlab::trig::TrigPolynomial;

// ---------------------------------------------------------------------------
// GF(2) linear algebra
// ---------------------------------------------------------------------------

fn bitmatrix_strategy() -> impl Strategy<Value = BitMatrix> {
    (1usize..8, 1usize..8).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(0u8..2, c), r)
            .prop_map(|rows| BitMatrix::from_rows(&rows))
    })
}

proptest! {
    #[test]
    fn rank_equals_transpose_rank(m in bitmatrix_strategy()) {
        prop_assert_eq!(m.rank(), m.transpose().rank());
    }

    #[test]
    fn rank_nullity(m in bitmatrix_strategy()) {
        let kernel = m.kernel_basis();
        prop_assert_eq!(m.cols(), m.rank() + kernel.len());
        for v in &kernel {
            prop_assert!(m.mul_vec(v).unwrap().is_zero());
        }
    }

    #[test]
    fn solve_replays_exactly(m in bitmatrix_strategy(), bits in prop::collection::vec(0u8..2, 16)) {
        let x0 = BitVec::from_bits((0..m.cols()).map(|j| bits[j % bits.len()] == 1));
        let b = m.mul_vec(&x0).unwrap();
        let x = m.solve(&b).unwrap().expect("b lies in the column span");
        prop_assert_eq!(m.mul_vec(&x).unwrap(), b);
    }
}

// ---------------------------------------------------------------------------
// Trigonometric calculus
// ---------------------------------------------------------------------------

fn trig_strategy() -> impl Strategy<Value = TrigPolynomial> {
    (
        -1.0f64..1.0,
        prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 0..5),
    )
        .prop_map(|(a0, h)| TrigPolynomial::new(a0, h))
}

proptest! {
    #[test]
    fn leibniz_rule_on_coefficients(f in trig_strategy(), g in trig_strategy()) {
        let lhs = f.mul(&g).derivative();
        let rhs = f.derivative().mul(&g).add(&f.mul(&g.derivative()));
        let gap = lhs.sub(&rhs).coeff_norm();
        prop_assert!(gap <= 1e-10 * (1.0 + lhs.coeff_norm()));
    }

    #[test]
    fn shift_is_an_involution(f in trig_strategy()) {
        let back = f.shift_half_turn().shift_half_turn();
        prop_assert!(back.sub(&f).coeff_norm() == 0.0);
    }
}

// ---------------------------------------------------------------------------
// Random valid chain complexes and the exhaustive homology oracle
// ---------------------------------------------------------------------------

/// Builds a random complex with `dd = 0` by construction: the boundary of
/// every cell one dimension up is a random element of the kernel of the
/// boundary matrix below.
fn random_complex(rng: &mut SplitMix64, top: usize, max_per_dim: usize) -> ChainComplex {
    let counts: Vec<usize> = (0..=top).map(|_| 1 + rng.below(max_per_dim)).collect();
    let name_of = |d: usize, i: usize| format!("d{d}c{i}");
    let mut cells = Vec::new();
    for (d, &n) in counts.iter().enumerate() {
        for i in 0..n {
            cells.push((name_of(d, i), d));
        }
    }
    let mut boundary: Vec<(String, Vec<String>)> = Vec::new();
    // Kernel vectors of the previous boundary matrix, maintained as we go.
    let mut complex =
        ChainComplex::build("random", cells.clone(), vec![]).expect("names are unique");
    for d in 1..=top {
        let kernel: Vec<BitVec> = if d == 1 {
            (0..counts[0])
                .map(|i| {
                    let mut v = BitVec::zeros(counts[0]);
                    v.set(i, true);
                    v
                })
                .collect()
        } else {
            complex.boundary_matrix(d - 1).unwrap().kernel_basis()
        };
        for i in 0..counts[d] {
            let mut v = BitVec::zeros(counts[d - 1]);
            for k in &kernel {
                if rng.next_u64() & 1 == 1 {
                    v.xor_assign(k);
                }
            }
            let faces: Vec<String> = v.ones().map(|j| name_of(d - 1, j)).collect();
            if !faces.is_empty() {
                boundary.push((name_of(d, i), faces));
            }
        }
        complex = ChainComplex::build("random", cells.clone(), boundary.clone())
            .expect("generated data is well-formed");
    }
    complex
}

/// Betti numbers by exhaustive enumeration: count cycles and distinct
/// boundaries among all subsets, no linear algebra involved.
fn brute_force_betti(complex: &ChainComplex) -> Vec<usize> {
    let top = complex.top_dim().expect("nonempty");
    let boundary_of_subset = |dim: usize, mask: u32| -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for (i, cell) in complex.cells(dim).iter().enumerate() {
            if mask >> i & 1 == 0 {
                continue;
            }
            for face in complex.boundary_of(cell).unwrap() {
                if !out.remove(face) {
                    out.insert(face.clone());
                }
            }
        }
        out
    };
    (0..=top)
        .map(|k| {
            let nk = complex.cells(k).len();
            assert!(nk <= 16, "oracle is exhaustive; keep the complex small");
            let cycles = (0u32..1 << nk)
                .filter(|&mask| boundary_of_subset(k, mask).is_empty())
                .count();
            let boundaries: HashSet<BTreeSet<String>> = if k == top {
                HashSet::from([BTreeSet::new()])
            } else {
                let above = complex.cells(k + 1).len();
                (0u32..1 << above).map(|mask| boundary_of_subset(k + 1, mask)).collect()
            };
            assert!(cycles.is_power_of_two());
            assert!(boundaries.len().is_power_of_two());
            cycles.ilog2() as usize - boundaries.len().ilog2() as usize
        })
        .collect()
}

#[test]
fn library_betti_matches_the_exhaustive_oracle() {
    let mut rng = SplitMix64::new(101);
    for round in 0..150 {
        let top = 1 + rng.below(3);
        let complex = random_complex(&mut rng, top, 6);
        assert!(complex.validate().is_ok(), "generator must produce valid complexes");
        let fast = complex.betti().unwrap();
        let slow = brute_force_betti(&complex);
        assert_eq!(fast, slow, "round {round}: {complex:?}");
    }
}

#[test]
fn euler_characteristic_equals_alternating_betti_sum() {
    let mut rng = SplitMix64::new(102);
    for _ in 0..100 {
        let top = 1 + rng.below(3);
        let complex = random_complex(&mut rng, top, 6);
        let betti = complex.betti().unwrap();
        let alternating: i64 = betti
            .iter()
            .enumerate()
            .map(|(k, &b)| if k % 2 == 0 { b as i64 } else { -(b as i64) })
            .sum();
        assert_eq!(alternating, complex.euler_characteristic());
    }
}

#[test]
fn betti_matches_the_rank_formula() {
    let mut rng = SplitMix64::new(103);
    for _ in 0..100 {
        let depth = 1 + rng.below(3);
        let complex = random_complex(&mut rng, depth, 6);
        let top = complex.top_dim().unwrap();
        let rank = |k: usize| {
            if k == 0 || k > top {
                0
            } else {
                complex.boundary_matrix(k).unwrap().rank()
            }
        };
        let betti = complex.betti().unwrap();
        for (k, &b) in betti.iter().enumerate().take(top + 1) {
            assert_eq!(b, complex.cells(k).len() - rank(k) - rank(k + 1));
        }
    }
}

#[test]
fn homologous_is_an_equivalence_relation() {
    let mut rng = SplitMix64::new(104);
    for _ in 0..60 {
        let depth = 1 + rng.below(2);
        let complex = random_complex(&mut rng, depth, 5);
        let top = complex.top_dim().unwrap();
        let k = rng.below(top + 1);
        // Random cycles: random combinations of a kernel basis.
        let kernel: Vec<BitVec> = if k == 0 {
            let n = complex.cells(0).len();
            (0..n)
                .map(|i| {
                    let mut v = BitVec::zeros(n);
                    v.set(i, true);
                    v
                })
                .collect()
        } else {
            complex.boundary_matrix(k).unwrap().kernel_basis()
        };
        let mut cycle = || {
            let mut v = BitVec::zeros(complex.cells(k).len());
            for b in &kernel {
                if rng.next_u64() & 1 == 1 {
                    v.xor_assign(b);
                }
            }
            Chain::new(k, v.ones().map(|i| complex.cells(k)[i].clone()))
        };
        let (z1, z2, z3) = (cycle(), cycle(), cycle());
        assert!(complex.homologous(&z1, &z1).unwrap());
        assert_eq!(
            complex.homologous(&z1, &z2).unwrap(),
            complex.homologous(&z2, &z1).unwrap()
        );
        if complex.homologous(&z1, &z2).unwrap() && complex.homologous(&z2, &z3).unwrap() {
            assert!(complex.homologous(&z1, &z3).unwrap());
        }
    }
}

#[test]
fn homology_basis_members_are_cycles_not_boundaries_and_independent() {
    let mut rng = SplitMix64::new(105);
    for _ in 0..60 {
        let depth = 1 + rng.below(3);
        let complex = random_complex(&mut rng, depth, 5);
        let top = complex.top_dim().unwrap();
        for k in 0..=top {
            let basis = complex.homology_basis(k).unwrap();
            assert_eq!(basis.len(), complex.betti().unwrap()[k]);
            for z in &basis {
                assert!(complex.is_cycle(z).unwrap());
                assert!(!complex.is_boundary(z).unwrap());
            }
            // Pairwise non-homologous.
            for i in 0..basis.len() {
                for j in 0..i {
                    assert!(!complex.homologous(&basis[i], &basis[j]).unwrap());
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Diagram equivalence
// ---------------------------------------------------------------------------

/// Two different spanning chord sets for the same random partition of
/// points must define the same subalgebra point.
#[test]
fn same_point_is_invariant_under_respanning() {
    let mut rng = SplitMix64::new(106);
    for _ in 0..200 {
        let n_blocks = 1 + rng.below(3);
        let mut angle = 0.0;
        let mut star_chords = Vec::new();
        let mut path_chords = Vec::new();
        let mut total_rank = 0;
        for _ in 0..n_blocks {
            let size = 2 + rng.below(3);
            let block: Vec<f64> = (0..size)
                .map(|_| {
                    angle += 0.3 + rng.uniform(0.0, 0.4);
                    angle
                })
                .collect();
            total_rank += size - 1;
            for w in block.windows(2) {
                path_chords.push(Chord::from_angles(w[0], w[1]).unwrap());
            }
            for p in &block[1..] {
                star_chords.push(Chord::from_angles(block[0], *p).unwrap());
            }
        }
        let path = ChordDiagram::new(path_chords);
        let star = ChordDiagram::new(star_chords);
        assert!(same_point(&path, &star));
        assert!(same_point(&star, &path));
        assert!(same_point(&path, &path));
        assert_eq!(path.rank(), total_rank);
        assert_eq!(star.rank(), total_rank);
    }
}
