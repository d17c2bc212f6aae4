//! The two cell complexes the rest of the crate reasons about, shipped as
//! literal data: the 4-cell model of the closed rank-1 variety (`cd1`) and
//! the 28-cell model of the closed rank-2 variety (`cd2`).
//!
//! Cell names are ASCII transliterations of the usual symbols:
//!
//! | symbol | name       | symbol | name      |
//! |--------|------------|--------|-----------|
//! | Γ      | `Gamma`    | Γ∞     | `Gamma_inf` |
//! | Δ      | `Delta`    | Δ∞     | `Delta_inf` |
//! | Ξ      | `Xi`       | Ξ∞     | `Xi_inf`    |
//! | Θ      | `Theta`    | Θ∞     | `Theta_inf` |
//! | ℵ      | `aleph`    | ℵ∞     | `aleph_inf` |
//! | e⁺     | `ep`       | e⁺∞    | `ep_inf`    |
//! | e⁻     | `em`       | e⁻∞    | `em_inf`    |
//! | A…e    | unchanged  | A∞…d∞  | `A_inf`…`d_inf` |
//!
//! The same complexes ship as JSON fixtures (`fixtures/cd1.json`,
//! `fixtures/cd2.json`), transcribed separately; a test asserts the two
//! transcriptions agree, so a typo in either place is caught.

use std::collections::BTreeMap;

use crate::chain::{Chain, ChainComplex};

/// Fixture copy of the 4-cell complex, in the chain-complex JSON format.
pub const CD1_JSON: &str = include_str!("../fixtures/cd1.json");
/// Fixture copy of the 28-cell complex, in the chain-complex JSON format.
pub const CD2_JSON: &str = include_str!("../fixtures/cd2.json");

/// A complex together with the named chains that the headline homology
/// statements are about.
#[derive(Clone, Debug)]
pub struct NamedComplexBundle {
    pub complex: ChainComplex,
    pub distinguished_chains: BTreeMap<String, Chain>,
}

impl NamedComplexBundle {
    pub fn chain(&self, name: &str) -> &Chain {
        &self.distinguished_chains[name]
    }
}

fn cells(table: &[(&str, usize)]) -> Vec<(String, usize)> {
    table.iter().map(|&(id, dim)| (id.to_string(), dim)).collect()
}

fn boundaries(table: &[(&str, &[&str])]) -> Vec<(String, Vec<String>)> {
    table
        .iter()
        .map(|&(id, faces)| (id.to_string(), faces.iter().map(|s| s.to_string()).collect()))
        .collect()
}

/// The closed rank-1 variety: a Moebius band modeled by four cells.
/// `M` is the open-band 2-cell (chords missing the marked point), `L` the
/// 1-cell of chords through the marked point, `S` the 1-cell of vanishing-
/// derivative conditions away from the marked point, `P` the single vertex.
pub fn cd1_complex() -> NamedComplexBundle {
    let complex = ChainComplex::build(
        "cd1",
        cells(&[("P", 0), ("L", 1), ("S", 1), ("M", 2)]),
        boundaries(&[("M", &["S"])]),
    )
    .expect("cd1 data is well-formed");
    let mut distinguished_chains = BTreeMap::new();
    distinguished_chains.insert("L_cd1".to_string(), Chain::new(1, ["L"]));
    NamedComplexBundle { complex, distinguished_chains }
}

/// The closed rank-2 variety: 28 cells in dimensions 0 through 4, with the
/// mod-2 boundary table transcribed verbatim.
pub fn cd2_complex() -> NamedComplexBundle {
    let complex = ChainComplex::build(
        "cd2",
        cells(&[
            ("aleph_inf", 0),
            ("aleph", 1),
            ("Gamma_inf", 1),
            ("Delta_inf", 1),
            ("Xi_inf", 1),
            ("Theta_inf", 1),
            ("Gamma", 2),
            ("Delta", 2),
            ("Xi", 2),
            ("Theta", 2),
            ("a_inf", 2),
            ("b_inf", 2),
            ("c_inf", 2),
            ("d_inf", 2),
            ("ep_inf", 2),
            ("em_inf", 2),
            ("a", 3),
            ("b", 3),
            ("c", 3),
            ("d", 3),
            ("ep", 3),
            ("em", 3),
            ("A_inf", 3),
            ("B_inf", 3),
            ("C_inf", 3),
            ("A", 4),
            ("B", 4),
            ("C", 4),
        ]),
        boundaries(&[
            ("A", &["a", "b", "d", "A_inf", "B_inf"]),
            ("B", &["c", "B_inf", "A_inf", "em"]),
            ("C", &["d", "ep"]),
            ("a", &["Gamma", "Delta", "a_inf", "c_inf"]),
            ("b", &["c_inf", "Xi", "Gamma", "b_inf"]),
            ("c", &["b_inf", "Xi", "Delta", "a_inf", "Theta"]),
            ("d", &["Xi", "Delta"]),
            ("ep", &["Delta", "Xi"]),
            ("em", &["Delta", "Xi", "Theta"]),
            ("A_inf", &["c_inf", "a_inf", "em_inf"]),
            ("B_inf", &["b_inf", "c_inf", "em_inf"]),
            ("Gamma", &["aleph"]),
            ("Delta", &["Delta_inf", "Xi_inf", "aleph"]),
            ("Xi", &["Xi_inf", "Delta_inf", "aleph"]),
            ("a_inf", &["Gamma_inf", "Delta_inf", "Xi_inf", "Theta_inf"]),
            ("b_inf", &["Xi_inf", "Delta_inf", "Gamma_inf", "Theta_inf"]),
            ("c_inf", &["Gamma_inf", "Theta_inf"]),
            ("d_inf", &["Delta_inf"]),
            ("ep_inf", &["Delta_inf", "Xi_inf"]),
            ("em_inf", &["Delta_inf", "Xi_inf"]),
        ]),
    )
    .expect("cd2 data is well-formed");
    let mut distinguished_chains = BTreeMap::new();
    distinguished_chains.insert("C_inf".to_string(), Chain::new(3, ["C_inf"]));
    distinguished_chains.insert("e_inf_sum".to_string(), Chain::new(2, ["ep_inf", "em_inf"]));
    distinguished_chains.insert("Gamma_inf".to_string(), Chain::new(1, ["Gamma_inf"]));
    distinguished_chains.insert("Theta_inf".to_string(), Chain::new(1, ["Theta_inf"]));
    NamedComplexBundle { complex, distinguished_chains }
}
