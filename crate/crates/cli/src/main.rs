//! `cdlab` command-line front end: load cell complexes, run the claim
//! verification report, and drive the analytic scans with explicit seeds
//! and tolerances.
//!
//! Exit codes: 0 when everything asked for passed, 1 when a verification
//! check failed, 2 on input errors (bad files, bad syntax, bad flags).

use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cdlab::analytic::{
    bu_roots, degeneracy_scan, monodromy_sign, BuRoots, FrameLoop, FunctionSubspace, ScanReport,
    SCAN_DEFAULT_GRID, SCAN_DEFAULT_TOL,
};
use cdlab::chain::ChainComplex;
use cdlab::chord::ChordDiagram;
use cdlab::report::{fmt_f64, registry, verify_report};
use cdlab::rng::SplitMix64;
use cdlab::simplicial::{
    cohomology_basis, cup_square_pairing, is_cocycle, klein_bottle, pair, restricted_w, torus,
    Cochain,
};
use cdlab::trig::TrigPolynomial;

#[derive(Parser)]
#[command(
    name = "cdlab",
    about = "Verification workbench for the mod-2 topology of chord-diagram varieties",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SeedArg {
    /// Seed for every randomized suite (SplitMix64 stream).
    #[arg(long, env = "CDLAB_SEED", default_value_t = 1)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a chain-complex JSON file and print its Betti numbers.
    Homology {
        /// Path to a complex in the chain-complex JSON format.
        path: String,
        #[arg(long)]
        json: bool,
    },
    /// Run the full claim registry and print one line per claim.
    Verify {
        #[command(flatten)]
        seed: SeedArg,
        /// List the registry (claim ids and statements) without running.
        #[arg(long)]
        list: bool,
        #[arg(long)]
        json: bool,
    },
    /// Count antipodal critical pairs of function pairs.
    Bu {
        /// First function as `{"a0": x, "cos": [...], "sin": [...]}`.
        #[arg(long, requires = "g", conflicts_with = "random")]
        f: Option<String>,
        /// Second function, same format.
        #[arg(long, requires = "f")]
        g: Option<String>,
        /// Run this many seeded random pairs instead of an explicit pair.
        #[arg(long)]
        random: Option<u32>,
        /// Harmonic degree of the random functions.
        #[arg(long, default_value_t = 4)]
        degree: usize,
        /// Sample count for root bracketing (default: auto per pair).
        #[arg(long)]
        samples: Option<usize>,
        /// Bisection refinement tolerance.
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[command(flatten)]
        seed: SeedArg,
        #[arg(long)]
        json: bool,
    },
    /// Rank and endpoint partition of a chord diagram.
    Rank {
        /// Comma-separated chords, each `angle-angle` in radians,
        /// e.g. "0.0-1.5708,2.0-3.0".
        diagram: String,
        #[arg(long)]
        json: bool,
    },
    /// Scan chord-pair space for rank drops of the 6-condition evaluation
    /// map on a random 7-dimensional map space.
    ScanF7 {
        #[command(flatten)]
        seed: SeedArg,
        /// Grid side per angle axis.
        #[arg(long, default_value_t = SCAN_DEFAULT_GRID)]
        grid: usize,
        /// Relative threshold on sigma_6 / sigma_1.
        #[arg(long, default_value_t = SCAN_DEFAULT_TOL)]
        tol: f64,
        /// Harmonic degree of the random map space.
        #[arg(long, default_value_t = 3)]
        degree: usize,
        /// Also scan at this grid side and report how much of the primary
        /// flagged set lands inside the second scan's neighborhood.
        #[arg(long)]
        compare_grid: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Cup-square facts on the Klein bottle and the torus control surface.
    Klein {
        #[arg(long)]
        json: bool,
    },
    /// Monodromy signs of transported functional frames.
    Monodromy {
        /// Steps per loop traversal.
        #[arg(long, default_value_t = 64)]
        steps: usize,
        #[arg(long)]
        json: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Homology { path, json } => cmd_homology(&path, json),
        Command::Verify { seed, list, json } => cmd_verify(seed.seed, list, json),
        Command::Bu { f, g, random, degree, samples, tol, seed, json } => {
            cmd_bu(f, g, random, degree, samples, tol, seed.seed, json)
        }
        Command::Rank { diagram, json } => cmd_rank(&diagram, json),
        Command::ScanF7 { seed, grid, tol, degree, compare_grid, json } => {
            cmd_scan_f7(seed.seed, grid, tol, degree, compare_grid, json)
        }
        Command::Klein { json } => cmd_klein(json),
        Command::Monodromy { steps, json } => cmd_monodromy(steps, json),
    };
    ExitCode::from(code)
}

const EXIT_OK: u8 = 0;
const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_INPUT_ERROR: u8 = 2;

fn input_error(message: impl std::fmt::Display) -> u8 {
    eprintln!("error: {message}");
    EXIT_INPUT_ERROR
}

fn cmd_homology(path: &str, json: bool) -> u8 {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return input_error(format!("cannot read {path}: {e}")),
    };
    let complex = match ChainComplex::from_json_str(&text) {
        Ok(c) => c,
        Err(e) => return input_error(format!("cannot parse {path}: {e}")),
    };
    let validation = complex.validate();
    if !validation.is_ok() {
        if json {
            println!(
                "{}",
                serde_json::json!({
                    "name": complex.name(),
                    "valid": false,
                    "violations": validation,
                })
            );
        } else {
            println!("complex: {}", complex.name());
            println!("validation: FAILED");
            println!("{validation}");
        }
        return EXIT_INPUT_ERROR;
    }
    let betti = complex.betti().expect("validated above");
    let counts = complex.cell_counts();
    if json {
        println!(
            "{}",
            serde_json::json!({
                "name": complex.name(),
                "valid": true,
                "cells": counts,
                "betti": betti,
                "euler_characteristic": complex.euler_characteristic(),
            })
        );
    } else {
        println!("complex: {}", complex.name());
        println!("cells: {}", join_counts(&counts));
        println!("validation: ok");
        println!("betti: {}", join_counts(&betti));
        println!("euler characteristic: {}", complex.euler_characteristic());
    }
    EXIT_OK
}

fn join_counts(xs: &[usize]) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

fn cmd_verify(seed: u64, list: bool, json: bool) -> u8 {
    if list {
        if json {
            let items: Vec<_> = registry()
                .iter()
                .map(|c| serde_json::json!({"id": c.id, "statement": c.description}))
                .collect();
            println!("{}", serde_json::json!(items));
        } else {
            for c in registry() {
                println!("{:<26} {}", c.id, c.description);
            }
        }
        return EXIT_OK;
    }
    let report = verify_report(seed);
    if json {
        println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    } else {
        print!("{}", report.render_text());
    }
    if report.all_pass() {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_bu(
    f: Option<String>,
    g: Option<String>,
    random: Option<u32>,
    degree: usize,
    samples: Option<usize>,
    tol: f64,
    seed: u64,
    json: bool,
) -> u8 {
    let pairs: Vec<(TrigPolynomial, TrigPolynomial)> = match (f, g, random) {
        (Some(fs), Some(gs), None) => {
            let f = match TrigPolynomial::from_json_str(&fs) {
                Ok(p) => p,
                Err(e) => return input_error(format!("bad --f: {e}")),
            };
            let g = match TrigPolynomial::from_json_str(&gs) {
                Ok(p) => p,
                Err(e) => return input_error(format!("bad --g: {e}")),
            };
            vec![(f, g)]
        }
        (None, None, Some(n)) => {
            let mut rng = SplitMix64::new(seed);
            (0..n)
                .map(|_| {
                    (TrigPolynomial::random(&mut rng, degree), TrigPolynomial::random(&mut rng, degree))
                })
                .collect()
        }
        _ => return input_error("pass either --f and --g, or --random N"),
    };
    let (mut odd, mut even, mut degenerate) = (0u32, 0u32, 0u32);
    let mut rows = Vec::new();
    for (i, (f, g)) in pairs.iter().enumerate() {
        let n = samples.unwrap_or_else(|| cdlab::analytic::default_bu_samples(f, g));
        match bu_roots(f, g, n, tol) {
            Err(e) => return input_error(format!("pair {i}: {e}")),
            Ok(BuRoots::Degenerate) => {
                degenerate += 1;
                rows.push(serde_json::json!({"pair": i, "parity": "degenerate"}));
                if !json {
                    println!("pair {i}: parity=Degenerate");
                }
            }
            Ok(BuRoots::Roots(roots)) => {
                let parity = if roots.len() % 2 == 1 { "Odd" } else { "Even" };
                if roots.len() % 2 == 1 {
                    odd += 1;
                } else {
                    even += 1;
                }
                let listed: Vec<String> = roots
                    .iter()
                    .map(|r| {
                        let (lambda, mu) = r.direction.pair();
                        format!(
                            "(phi={}, dir=({}:{}))",
                            fmt_f64(r.phi),
                            fmt_f64(lambda),
                            fmt_f64(mu)
                        )
                    })
                    .collect();
                rows.push(serde_json::json!({
                    "pair": i,
                    "parity": parity,
                    "roots": roots.iter().map(|r| r.phi).collect::<Vec<_>>(),
                }));
                if !json {
                    println!("pair {i}: parity={parity} roots={} {}", roots.len(), listed.join(" "));
                }
            }
        }
    }
    if json {
        println!(
            "{}",
            serde_json::json!({
                "pairs": rows,
                "summary": {"odd": odd, "even": even, "degenerate": degenerate},
            })
        );
    } else {
        println!("summary: odd={odd} even={even} degenerate={degenerate}");
    }
    if even == 0 {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    }
}

fn cmd_rank(diagram: &str, json: bool) -> u8 {
    let d = match ChordDiagram::parse(diagram) {
        Ok(d) => d,
        Err(e) => return input_error(e),
    };
    let partition = d.partition();
    if json {
        let blocks: Vec<Vec<f64>> = partition
            .blocks()
            .iter()
            .map(|b| b.iter().map(|p| p.angle()).collect())
            .collect();
        println!(
            "{}",
            serde_json::json!({"rank": d.rank(), "chords": d.chords().len(), "partition": blocks})
        );
    } else {
        println!("rank: {}", d.rank());
        let blocks: Vec<String> = partition
            .blocks()
            .iter()
            .map(|b| {
                let points: Vec<String> = b.iter().map(|p| fmt_f64(p.angle())).collect();
                format!("{{{}}}", points.join(", "))
            })
            .collect();
        println!("partition: {}", blocks.join(" "));
    }
    EXIT_OK
}

/// Fraction of `coarse` flagged cells whose angle point maps into the
/// one-cell neighborhood of a `fine` flagged cell.
fn containment_rate(coarse: &ScanReport, fine: &ScanReport) -> f64 {
    if coarse.flagged.is_empty() {
        return 1.0;
    }
    let fine_set: std::collections::HashSet<[usize; 4]> = fine.flagged.iter().copied().collect();
    let map_index = |i: usize| -> usize {
        // Angle of the coarse cell center, re-gridded onto the fine lattice.
        let angle = (i as f64 + 0.5) / coarse.grid as f64;
        ((angle * fine.grid as f64 - 0.5).round() as isize).rem_euclid(fine.grid as isize) as usize
    };
    let near = |cell: [usize; 4]| -> bool {
        let deltas = [-1isize, 0, 1];
        deltas.iter().any(|&a| {
            deltas.iter().any(|&b| {
                deltas.iter().any(|&c| {
                    deltas.iter().any(|&d| {
                        let n = fine.grid as isize;
                        let probe = [
                            (cell[0] as isize + a).rem_euclid(n) as usize,
                            (cell[1] as isize + b).rem_euclid(n) as usize,
                            (cell[2] as isize + c).rem_euclid(n) as usize,
                            (cell[3] as isize + d).rem_euclid(n) as usize,
                        ];
                        fine_set.contains(&probe)
                    })
                })
            })
        })
    };
    let hits = coarse
        .flagged
        .iter()
        .filter(|cell| near([map_index(cell[0]), map_index(cell[1]), map_index(cell[2]), map_index(cell[3])]))
        .count();
    hits as f64 / coarse.flagged.len() as f64
}

fn cmd_scan_f7(
    seed: u64,
    grid: usize,
    tol: f64,
    degree: usize,
    compare_grid: Option<usize>,
    json: bool,
) -> u8 {
    let mut rng = SplitMix64::new(seed);
    let space = FunctionSubspace::random(&mut rng, 7, degree);
    let report = match degeneracy_scan(&space, grid, tol) {
        Ok(r) => r,
        Err(e) => return input_error(e),
    };
    let comparison = match compare_grid {
        None => None,
        Some(g2) => match degeneracy_scan(&space, g2, tol) {
            Ok(r2) => {
                let rate = containment_rate(&report, &r2);
                Some((g2, rate, r2))
            }
            Err(e) => return input_error(e),
        },
    };
    let pass = report.is_nonempty();
    let spread = report.has_component_spanning(2, 2);
    if json {
        let mut value = serde_json::json!({
            "grid": report.grid,
            "tol": report.tol,
            "scanned": report.scanned,
            "flagged": report.flagged.len(),
            "components": report.components,
            "nonempty": pass,
            "component_spanning_2_steps_2_axes": spread,
        });
        if let Some((g2, rate, r2)) = &comparison {
            value["compare"] = serde_json::json!({
                "grid": g2,
                "flagged": r2.flagged.len(),
                "containment_rate": rate,
            });
        }
        println!("{value}");
    } else {
        println!(
            "scan: grid {}^4, tol {} (relative sigma_6 / sigma_1), degree {degree}, seed {seed}",
            report.grid,
            fmt_f64(report.tol)
        );
        println!("flagged cells: {} / {} scanned", report.flagged.len(), report.scanned);
        println!("components: {}", report.components.len());
        if let Some(biggest) = report.components.first() {
            let mut extent = String::new();
            let _ = write!(extent, "{:?}", biggest.extent);
            println!(
                "largest component: {} cells, axis extents {extent}, axes with >=2 steps: {}",
                biggest.cells,
                biggest.axes_spanning(2)
            );
        }
        println!(
            "locus of dimension >= 2 (sampled-scale proxy): {}",
            if spread { "supported" } else { "not visible at this grid" }
        );
        if let Some((g2, rate, r2)) = &comparison {
            println!(
                "refinement: grid {g2}^4 flags {} cells; coarse-in-fine containment rate {}",
                r2.flagged.len(),
                fmt_f64(*rate)
            );
        }
        println!("result: {}", if pass { "PASS (flagged set nonempty)" } else { "FAIL (no flagged cells)" });
    }
    if pass {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    }
}

fn cmd_klein(json: bool) -> u8 {
    let klein = klein_bottle();
    let w = match restricted_w(&klein) {
        Ok(w) => w,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_CHECK_FAILED;
        }
    };
    let pair_u = pair(&w, &klein.loop_u);
    let pair_v = pair(&w, &klein.loop_v);
    let cocycle = is_cocycle(&klein.complex, &w);
    let square = cup_square_pairing(&klein, &w).unwrap_or(false);
    let torus_surface = torus();
    let torus_squares: Vec<bool> = match cohomology_basis(&torus_surface.complex, 1) {
        Ok(basis) => (1u32..(1 << basis.len()))
            .map(|mask| {
                let mut x = Cochain::zero(&torus_surface.complex, 1);
                for (i, b) in basis.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        x = x.add(b);
                    }
                }
                cup_square_pairing(&torus_surface, &x).unwrap_or(true)
            })
            .collect(),
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_CHECK_FAILED;
        }
    };
    let torus_all_zero = torus_squares.iter().all(|s| !s);
    let betti = klein.complex.betti_mod2();
    let ok = pair_u && !pair_v && cocycle && square && torus_all_zero && betti == [1, 2, 1];
    if json {
        println!(
            "{}",
            serde_json::json!({
                "betti_mod2": betti,
                "pair_with_u": pair_u,
                "pair_with_v": pair_v,
                "is_cocycle": cocycle,
                "cup_square": square,
                "torus_cup_squares_all_zero": torus_all_zero,
                "pass": ok,
            })
        );
    } else {
        println!("klein bottle (4x4 grid quotient): betti mod 2 = {}", join_counts(&betti));
        println!("restriction cocycle w: <w,u> = {}, <w,v> = {}, dw = 0: {cocycle}", u8::from(pair_u), u8::from(pair_v));
        println!("cup square <w cup w, [K]> = {}", u8::from(square));
        println!("torus control: all cup squares zero: {torus_all_zero}");
        println!("result: {}", if ok { "PASS" } else { "FAIL" });
    }
    if ok {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    }
}

fn cmd_monodromy(steps: usize, json: bool) -> u8 {
    let run = |frame, windings| monodromy_sign(frame, steps, windings);
    let results = (
        run(FrameLoop::Cd1Diameters, 1),
        run(FrameLoop::GammaInfFrame, 1),
        run(FrameLoop::Cd1Diameters, 2),
        run(FrameLoop::GammaInfFrame, 2),
    );
    let (a, b, c, d) = match results {
        (Ok(a), Ok(b), Ok(c), Ok(d)) => (a, b, c, d),
        (Err(e), ..) | (_, Err(e), ..) | (_, _, Err(e), _) | (_, _, _, Err(e)) => {
            return input_error(e)
        }
    };
    let ok = a == -1 && b == -1 && c == 1 && d == 1;
    if json {
        println!(
            "{}",
            serde_json::json!({
                "steps": steps,
                "diameter_frame": a,
                "two_point_frame": b,
                "diameter_frame_doubled": c,
                "two_point_frame_doubled": d,
                "pass": ok,
            })
        );
    } else {
        println!("steps per loop: {steps}");
        println!("diameter frame (one loop): {a}");
        println!("two-point derivative frame (one loop): {b}");
        println!("doubled loops: {c} / {d}");
        println!("result: {}", if ok { "PASS" } else { "FAIL" });
    }
    if ok {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    }
}
