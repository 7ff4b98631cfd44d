//! Command-line surface over the tree-moduli crate.
//!
//! Exit codes: 0 on success, 2 on usage errors (bad flags or unparseable
//! argument payloads), 1 on computation errors. Results go to stdout,
//! diagnostics to stderr.

use std::fmt::Write as _;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use tree_moduli::cohomology::{euler_characteristic, h0, h1, BundleSpec};
use tree_moduli::fitting::{parse_points_json, stratify_points, LocalFamily};
use tree_moduli::strata::{
    curve_aut_structure, specialization_poset, SpecializationPoset, StrataError, StratumRecord,
};
use tree_moduli::tree::{automorphism_group, canonical_code, multiplicity_profile, RationalTree};
use tree_moduli::Rat;

const DEFAULT_MAX_NODES: usize = 12;

#[derive(Parser)]
#[command(name = "tree-moduli", version, about = "Strata, automorphisms, cohomology and Fitting stratification for trees of projective lines")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate all strata with up to --max-nodes nodes
    Strata {
        #[arg(long)]
        max_nodes: usize,
        #[arg(long, value_enum, default_value_t = TableFormat::Table)]
        format: TableFormat,
    },
    /// Export the specialization poset of strata
    Poset {
        #[arg(long)]
        max_nodes: usize,
        #[arg(long, value_enum, default_value_t = PosetFormat::Dot)]
        format: PosetFormat,
    },
    /// Automorphism data of one tree
    Aut {
        /// Tree JSON: {"vertices": n, "edges": [[i, j], ...]}
        #[arg(long, value_parser = parse_tree)]
        tree: RationalTree,
    },
    /// Cohomology of a line bundle on one tree
    Cohom {
        /// Tree JSON: {"vertices": n, "edges": [[i, j], ...]}
        #[arg(long, value_parser = parse_tree)]
        tree: RationalTree,
        /// dualizing | dualizing-dual | dualizing-power:<k> | degrees:<d0,d1,...>
        #[arg(long, value_parser = parse_bundle)]
        bundle: BundleSpec,
        /// Also dump the section basis as JSON
        #[arg(long)]
        basis: bool,
    },
    /// Stratify points of a local family by node count
    Fitting {
        /// Family JSON: {"parameters": m, "nodes": ["t0*t1 - 1", ...]}
        #[arg(long, value_parser = parse_family)]
        family: LocalFamily<Rat>,
        /// Points JSON: [[0, 1], ["1/2", "-3"], ...]
        #[arg(long, value_parser = parse_points)]
        points: Points,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TableFormat {
    Table,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PosetFormat {
    Dot,
    Json,
}

#[derive(Clone)]
struct Points(Vec<Vec<Rat>>);

fn parse_tree(input: &str) -> Result<RationalTree, String> {
    serde_json::from_str(input).map_err(|e| format!("invalid tree JSON: {e}"))
}

fn parse_bundle(input: &str) -> Result<BundleSpec, String> {
    BundleSpec::parse(input).map_err(|e| e.to_string())
}

fn parse_family(input: &str) -> Result<LocalFamily<Rat>, String> {
    LocalFamily::from_json(input).map_err(|e| e.to_string())
}

fn parse_points(input: &str) -> Result<Points, String> {
    parse_points_json(input).map(Points).map_err(|e| e.to_string())
}

fn main() {
    let cli = Cli::parse();
    if let Err(message) = check_cap(&cli.command) {
        eprintln!("error: {message}");
        std::process::exit(2);
    }
    match run(cli.command) {
        Ok(output) => print!("{output}"),
        Err(message) => {
            eprintln!("error: {message}");
            std::process::exit(1);
        }
    }
}

fn enumeration_cap() -> Result<usize, String> {
    match std::env::var("TREE_MODULI_MAX_N") {
        Ok(raw) => raw
            .parse()
            .map_err(|_| format!("TREE_MODULI_MAX_N must be a nonnegative integer, got {raw:?}")),
        Err(std::env::VarError::NotPresent) => Ok(DEFAULT_MAX_NODES),
        Err(other) => Err(other.to_string()),
    }
}

fn check_cap(command: &Command) -> Result<(), String> {
    let max_nodes = match command {
        Command::Strata { max_nodes, .. } | Command::Poset { max_nodes, .. } => *max_nodes,
        _ => return Ok(()),
    };
    let cap = enumeration_cap()?;
    if max_nodes > cap {
        return Err(format!(
            "--max-nodes {max_nodes} exceeds the enumeration cap {cap}; raise TREE_MODULI_MAX_N to override"
        ));
    }
    Ok(())
}

fn run(command: Command) -> Result<String, String> {
    match command {
        Command::Strata { max_nodes, format } => {
            let poset = specialization_poset(max_nodes).map_err(|e| e.to_string())?;
            match format {
                TableFormat::Table => Ok(render_strata_table(&poset)),
                TableFormat::Json => {
                    let document = StrataDocument {
                        strata: poset.strata().iter().map(StratumRecord::from).collect(),
                    };
                    to_json_line(&document)
                }
            }
        }
        Command::Poset { max_nodes, format } => {
            let poset = specialization_poset(max_nodes).map_err(|e| e.to_string())?;
            match format {
                PosetFormat::Dot => Ok(poset.to_dot()),
                PosetFormat::Json => to_json_line(&poset.export()),
            }
        }
        Command::Aut { tree } => Ok(render_aut(&tree)),
        Command::Cohom { tree, bundle, basis } => {
            let bundle = bundle.realize(&tree).map_err(|e| e.to_string())?;
            let sections = h0::<Rat>(&bundle);
            let h1_dim = h1::<Rat>(&bundle).map_err(|e| e.to_string())?;
            let chi = euler_characteristic(&bundle);
            let mut out = format!("h0={} h1={} chi={}\n", sections.dimension, h1_dim, chi);
            if basis {
                let coefficients: Vec<Vec<Vec<String>>> = sections
                    .basis
                    .iter()
                    .map(|section| {
                        section
                            .coefficients
                            .iter()
                            .map(|forms| forms.iter().map(Rat::to_string).collect())
                            .collect()
                    })
                    .collect();
                let document = BasisDocument {
                    dimension: sections.dimension,
                    basis: coefficients,
                };
                out.push_str(&to_json_line(&document)?);
            }
            Ok(out)
        }
        Command::Fitting { family, points } => {
            let strata = stratify_points(&family, &points.0).map_err(|e| e.to_string())?;
            let mut out = String::new();
            for (point, index) in strata {
                let coords: Vec<String> = point.iter().map(Rat::to_string).collect();
                let _ = writeln!(out, "point=[{}] exact={}", coords.join(", "), index.exact);
            }
            Ok(out)
        }
    }
}

#[derive(Serialize)]
struct StrataDocument {
    strata: Vec<StratumRecord>,
}

#[derive(Serialize)]
struct BasisDocument {
    dimension: usize,
    basis: Vec<Vec<Vec<String>>>,
}

fn to_json_line<T: Serialize>(value: &T) -> Result<String, String> {
    serde_json::to_string(value)
        .map(|mut s| {
            s.push('\n');
            s
        })
        .map_err(|e| e.to_string())
}

fn render_strata_table(poset: &SpecializationPoset) -> String {
    let headers = ["code", "nodes", "codim", "max_mult", "aut_order", "aut_dim", "stack_dim"];
    let mut rows: Vec<[String; 7]> = Vec::with_capacity(poset.strata().len());
    for stratum in poset.strata() {
        let graph_aut = automorphism_group(&stratum.tree);
        rows.push([
            stratum.code.as_str().to_string(),
            stratum.node_count.to_string(),
            stratum.codimension.to_string(),
            stratum.max_multiplicity.to_string(),
            graph_aut.order.to_string(),
            stratum
                .aut_structure
                .as_ref()
                .map_or("-".to_string(), |a| a.dimension.to_string()),
            stratum
                .stack_dimension
                .map_or("-".to_string(), |d| d.to_string()),
        ]);
    }
    let mut widths: Vec<usize> = headers.iter().map(|h| h.len()).collect();
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = String::new();
    let render_row = |cells: &[String]| -> String {
        let mut line = String::new();
        for (i, cell) in cells.iter().enumerate() {
            if i > 0 {
                line.push_str("  ");
            }
            let _ = write!(line, "{:<width$}", cell, width = widths[i]);
        }
        line.trim_end().to_string()
    };
    let header_cells: Vec<String> = headers.iter().map(|h| h.to_string()).collect();
    out.push_str(&render_row(&header_cells));
    out.push('\n');
    for row in &rows {
        out.push_str(&render_row(row));
        out.push('\n');
    }
    out
}

fn render_aut(tree: &RationalTree) -> String {
    let mut out = String::new();
    let profile = multiplicity_profile(tree);
    let aut = automorphism_group(tree);
    let _ = writeln!(out, "code: {}", canonical_code(tree));
    let _ = writeln!(
        out,
        "tree: {}",
        serde_json::to_string(tree).expect("tree serializes")
    );
    let _ = writeln!(out, "vertices: {}", tree.vertex_count());
    let _ = writeln!(out, "nodes: {}", tree.edge_count());
    let _ = writeln!(out, "max multiplicity: {}", profile.max_multiplicity());
    let _ = writeln!(out, "|Aut(Gamma)|: {}", aut.order);
    for generator in &aut.generators {
        let images: Vec<String> = generator.iter().map(usize::to_string).collect();
        let _ = writeln!(out, "generator: [{}]", images.join(", "));
    }
    match curve_aut_structure(tree) {
        Ok(structure) if structure.is_smooth_exception => {
            let _ = writeln!(
                out,
                "Aut(C): dimension 3 (automorphism group of the projective line), component group order 1"
            );
        }
        Ok(structure) => {
            let _ = writeln!(
                out,
                "Aut(C): dimension {}, E factors {}, Gm factors {}, component group order {}",
                structure.dimension,
                structure.e_factor_count,
                structure.gm_factor_count,
                structure.component_group.order
            );
        }
        Err(StrataError::MaxMultiplicityExceeded(m)) => {
            let _ = writeln!(out, "Aut(C): not determined (maximal multiplicity {m} exceeds 3)");
        }
    }
    out
}
