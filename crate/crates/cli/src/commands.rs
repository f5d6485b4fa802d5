use std::fmt::Write as _;
use std::path::Path;

use num_bigint::BigUint;
use qroot_core::cyclo::CycloNum;
use qroot_core::lattice::{
    enumerate_intermediate_lattices, iso_rank, k_map_is_iso, lambda_generator, validate_ell, IsoLattice,
    LatticeError,
};
use qroot_core::orbits::{dckp_table_rows, OrbitError, DCKP_TABLE_HEADER};
use qroot_core::pbw::{counit_character, PbwError, QuantumGroup, ReducedAlgebra};
use qroot_core::reps::{
    central_parameters, central_small_module_exists, construct_central_one_dim, counit_representation, lambda_m,
    sl3_showcase, Irreducibility, RepError, Representation, RepresentationJson,
};
use qroot_core::rootdata::{ConvexOrder, RootDataError, RootDatum};
use serde_json::{json, Value};
use thiserror::Error;

use crate::config::{parse_list, select_lattice, CommonArgs, Format};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    RootData(#[from] RootDataError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Pbw(#[from] PbwError),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Orbit(#[from] OrbitError),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
}

/// Rendered output plus whether a checked identity failed.
pub struct Outcome {
    pub body: String,
    pub falsified: bool,
}

fn render(format: Format, value: Value, text: String, falsified: bool) -> Result<Outcome, CliError> {
    let body = match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&value)?;
            s.push('\n');
            s
        }
        Format::Tsv | Format::Text => text,
    };
    Ok(Outcome { body, falsified })
}

fn weight_label(w: &[i64], symbol: &str) -> String {
    let mut out = String::new();
    for (i, &c) in w.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let sign = if c < 0 { "-" } else { "+" };
        if out.is_empty() {
            if c < 0 {
                out.push('-');
            }
        } else {
            let _ = write!(out, " {sign} ");
        }
        if c.abs() != 1 {
            let _ = write!(out, "{}", c.abs());
        }
        let _ = write!(out, "{symbol}{}", i + 1);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// `ε^k` when the value is a power of `ε = ζ_L^{L/ℓ}`, else `ζ_L^k`, else
/// the power-basis expansion.
fn unit_label(v: &CycloNum, ell: u64) -> String {
    let level = v.level();
    match v.root_exponent() {
        Some(k) => {
            let step = level / ell as u32;
            if ell as u32 * step == level && k % step == 0 {
                match k / step {
                    0 => "1".to_string(),
                    1 => "ε".to_string(),
                    j => format!("ε^{j}"),
                }
            } else {
                format!("ζ_{level}^{k}")
            }
        }
        None => v.to_string(),
    }
}

fn lattice_json(l: &IsoLattice) -> Value {
    json!({
        "index_over_root_lattice": l.index_over_root_lattice(),
        "index_in_weight_lattice": l.index_in_weight_lattice(),
        "is_product": l.is_product(),
        "basis_columns": l.basis().columns(),
    })
}

pub fn lattices(common: &CommonArgs) -> Result<Outcome, CliError> {
    let datum = common.datum()?;
    let all = enumerate_intermediate_lattices(datum.clone());
    let total = IsoLattice::root_lattice(datum.clone()).index_in_weight_lattice();
    let falsified = all
        .iter()
        .any(|l| l.index_over_root_lattice() * l.index_in_weight_lattice() != total);
    let generator = lambda_generator(&datum).ok();

    let mut text = format!("{}: |Λ/Q| = {total}, {} intermediate lattices\n", datum.label(), all.len());
    if let Some(g) = &generator {
        let _ = writeln!(text, "λ_Λ = {}", weight_label(g, "λ"));
    }
    for (i, l) in all.iter().enumerate() {
        let cols: Vec<String> = l
            .basis()
            .columns()
            .iter()
            .map(|c| weight_label(c, "λ"))
            .collect();
        let _ = writeln!(
            text,
            "[{i}] |M/Q| = {}  |Λ/M| = {}  product = {}  basis: {}",
            l.index_over_root_lattice(),
            l.index_in_weight_lattice(),
            l.is_product(),
            cols.join(", ")
        );
    }
    let value = json!({
        "schema": "qroot/lattices",
        "schema_version": 1,
        "factors": factor_labels(&datum),
        "weight_over_root_index": total,
        "lambda_generator": generator,
        "lattices": all.iter().map(lattice_json).collect::<Vec<_>>(),
    });
    render(common.format, value, text, falsified)
}

fn factor_labels(datum: &RootDatum) -> Vec<String> {
    datum.factors().iter().map(|f| f.kind.to_string()).collect()
}

pub fn isogeny_rank(common: &CommonArgs, m: &str, n: &str) -> Result<Outcome, CliError> {
    let datum = common.datum()?;
    let ell = common.ell()?;
    validate_ell(&datum, ell)?;
    let lm = select_lattice(&datum, m)?;
    let ln = select_lattice(&datum, n)?;
    if !lm.is_sublattice_of(&ln) {
        return Err(CliError::Usage(format!("lattice {m} is not contained in {n}")));
    }
    let computed = iso_rank(&lm, &ln, ell)?;
    let bijective = k_map_is_iso(&lm, &ln, ell)?;
    let index = lm.index_in(&ln)?;
    let products = lm.is_product() && ln.is_product();
    let factor_indices = lm.factor_indices(&ln)?;
    let predicted: Option<u64> = products.then(|| factor_indices.iter().map(|&k| gcd(ell, k)).product());
    let bijective_predicted = gcd(index, ell) == 1;
    let falsified = predicted.is_some_and(|p| p != computed) || bijective != bijective_predicted;

    let mut text = format!("{} ℓ = {ell}  |N/M| = {index}\n", datum.label());
    let _ = writeln!(text, "computed rank   {computed}");
    match predicted {
        Some(p) => {
            let _ = writeln!(text, "predicted rank  {p}  (factor indices {factor_indices:?})");
        }
        None => text.push_str("predicted rank  n/a  (lattices are not products over the simple factors)\n"),
    }
    let _ = writeln!(text, "bijective       {bijective}  (gcd(|N/M|, ℓ) = 1: {bijective_predicted})");
    text.push_str(if falsified { "MISMATCH\n" } else { "agree\n" });
    let value = json!({
        "schema": "qroot/isogeny-rank",
        "schema_version": 1,
        "factors": factor_labels(&datum),
        "ell": ell,
        "m": lattice_json(&lm),
        "n": lattice_json(&ln),
        "index": index,
        "factor_indices": factor_indices,
        "computed_rank": computed,
        "predicted_rank": predicted,
        "bijective": bijective,
        "agree": !falsified,
    });
    render(common.format, value, text, falsified)
}

fn gcd(a: u64, b: u64) -> u64 {
    num_integer::Integer::gcd(&a, &b)
}

fn load_representation(path: &Path) -> Result<Representation, CliError> {
    let raw = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let parsed: RepresentationJson = serde_json::from_str(&raw)?;
    Ok(Representation::from_json(&parsed)?)
}

pub fn verify_rep(common: &CommonArgs, builtin: Option<&str>, file: Option<&Path>) -> Result<Outcome, CliError> {
    let rep = match (builtin, file) {
        (Some("sl3-showcase"), None) => sl3_showcase(common.ell.unwrap_or(3))?,
        (Some("counit"), None) => {
            let datum = common.datum()?;
            let ell = common.ell()?;
            let lattice = common.lattice(&datum)?;
            counit_representation(&lattice, ell, common.level.unwrap_or(ell as u32))?
        }
        (Some(other), None) => {
            return Err(CliError::Usage(format!(
                "unknown builtin {other:?} (expected sl3-showcase or counit)"
            )))
        }
        (None, Some(path)) => load_representation(path)?,
        _ => return Err(CliError::Usage("pass exactly one of --builtin or --file".into())),
    };
    let ell = rep.ell();
    let relations = rep.verify_relations()?;
    let irreducibility = rep.irreducibility()?;
    let trick = rep.trick_check()?;
    let character = rep.l_character();

    let mut text = format!(
        "{} ℓ = {ell}  dim = {}  field Q(ζ_{})\n",
        rep.lattice().datum().label(),
        rep.dim(),
        rep.level()
    );
    let failures: Vec<&str> = relations.failures().map(|r| r.label.as_str()).collect();
    let _ = writeln!(
        text,
        "relations: {} ({} checked)",
        if relations.passed { "pass" } else { "FAIL" },
        relations.residuals.len()
    );
    for f in &failures {
        let _ = writeln!(text, "  nonzero: {f}");
    }
    let verdict = match irreducibility.verdict {
        Irreducibility::Yes => "yes",
        Irreducibility::No => "no",
        Irreducibility::Undetermined => "undetermined",
    };
    let _ = writeln!(
        text,
        "irreducible: {verdict} (span of words: {} of {})",
        irreducibility.span_dimension,
        rep.dim() * rep.dim()
    );
    let basis = rep.k_basis().columns();
    let character_json = match &character {
        Ok(report) => {
            let _ = writeln!(
                text,
                "ℓ-character: {}",
                if report.central { "central" } else { "not central" }
            );
            let mut k_values = Vec::new();
            for (mu, v) in basis.iter().zip(&report.character.k_values) {
                let two = rep.torus_power(mu, 2)?;
                let _ = writeln!(
                    text,
                    "  η(K_{{{}}}^ℓ) = {}   η(K^2ℓ) = {}",
                    weight_label(mu, "λ"),
                    unit_label(v, ell),
                    unit_label(&two, ell)
                );
                k_values.push(json!({
                    "weight": mu,
                    "value": v.to_strings(),
                    "label": unit_label(v, ell),
                    "square_label": unit_label(&two, ell),
                }));
            }
            let nonzero_root_values = report
                .character
                .e_values
                .iter()
                .chain(&report.character.f_values)
                .filter(|v| !v.is_zero())
                .count();
            json!({
                "homogeneous": true,
                "central": report.central,
                "k_values": k_values,
                "nonzero_root_values": nonzero_root_values,
            })
        }
        Err(e) => {
            let _ = writeln!(text, "ℓ-character: not defined ({e})");
            json!({ "homogeneous": false, "central": false, "error": e.to_string() })
        }
    };
    let _ = writeln!(
        text,
        "torus criterion: {} ({} forward, {} converse{})",
        if trick.passed() { "pass" } else { "FAIL" },
        trick.hypothesis_checks,
        trick.converse_checks,
        if trick.converse_skipped { ", converse skipped" } else { "" }
    );
    for v in &trick.violations {
        let _ = writeln!(text, "  violation: {v}");
    }
    let falsified = !relations.passed || !trick.passed();
    let value = json!({
        "schema": "qroot/verify-rep",
        "schema_version": 1,
        "factors": factor_labels(rep.lattice().datum()),
        "ell": ell,
        "field_level": rep.level(),
        "dim": rep.dim(),
        "relations": {
            "passed": relations.passed,
            "checked": relations.residuals.len(),
            "failures": failures,
        },
        "irreducible": verdict,
        "span_dimension": irreducibility.span_dimension,
        "character": character_json,
        "torus_criterion": trick,
    });
    render(common.format, value, text, falsified)
}

pub fn pbw(common: &CommonArgs, artifact: Option<&Path>) -> Result<Outcome, CliError> {
    let datum = common.datum()?;
    let ell = common.ell()?;
    let lattice = common.lattice(&datum)?;
    let character = counit_character(&lattice, ell);
    let algebra = match common.level {
        Some(level) => {
            let order = ConvexOrder::standard(&datum);
            let group = QuantumGroup::with_options(&lattice, ell, level, order)?;
            ReducedAlgebra::from_group(&group, character)?
        }
        None => ReducedAlgebra::new(&lattice, ell, character)?,
    };
    let (confluent, pairs) = match algebra.check_confluence() {
        Ok(n) => (true, n),
        Err(PbwError::NonConfluent { .. }) => (false, 0),
        Err(e) => return Err(e.into()),
    };
    let count = algebra.reduced_dimension()?;
    let expected = BigUint::from(ell).pow(datum.dimension() as u32);
    let falsified = !confluent || count != expected;
    if let Some(path) = artifact {
        std::fs::write(path, algebra.to_artifact().to_json()).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
    }
    let stats = algebra.stats();
    let mut text = format!("{} ℓ = {ell}  field Q(ζ_{})\n", datum.label(), algebra.level());
    let _ = writeln!(text, "rules: {}  critical pairs: {}", stats.rules, stats.pairs_checked);
    let _ = writeln!(
        text,
        "confluent: {}",
        if confluent { format!("yes ({pairs} overlaps resolve)") } else { "NO".into() }
    );
    let _ = writeln!(
        text,
        "normal monomials: {count}  expected ℓ^{} = {expected}  {}",
        datum.dimension(),
        if count == expected { "match" } else { "MISMATCH" }
    );
    let value = json!({
        "schema": "qroot/pbw",
        "schema_version": 1,
        "factors": factor_labels(&datum),
        "ell": ell,
        "field_level": algebra.level(),
        "lattice_basis": lattice.basis().to_rows(),
        "rules": stats.rules,
        "critical_pairs": stats.pairs_checked,
        "confluent": confluent,
        "normal_monomials": count.to_string(),
        "expected": expected.to_string(),
        "artifact": artifact.map(|p| p.display().to_string()),
    });
    render(common.format, value, text, falsified)
}

pub fn central_small(common: &CommonArgs, z_order: u64) -> Result<Outcome, CliError> {
    let datum = common.datum()?;
    let ell = common.ell()?;
    let lattice = common.lattice(&datum)?;
    let (m, d) = central_parameters(&lattice, ell)?;
    let exists = central_small_module_exists(&lattice, ell, z_order)?;
    let mut text = format!(
        "{} ℓ = {ell}  |M/Q| = {m}  d = gcd(ℓ, m) = {d}  order of z = {z_order}\n",
        datum.label()
    );
    let _ = writeln!(
        text,
        "{}",
        if exists { "small module exists" } else { "no small module" }
    );

    // z is a generator-value of Z(G_M); λ_M(z) is a primitive root of the
    // same order.
    let z_value = CycloNum::root_of_unity(z_order as u32, 1);
    let mut falsified = false;
    let construction = match construct_central_one_dim(&lattice, ell, &z_value, common.level) {
        Ok(rep) => {
            let relations = rep.verify_relations()?;
            let character = rep.l_character()?;
            let lam = lambda_m(&lattice)?;
            let two = rep.torus_power(&lam, 2)?;
            let round_trip = Representation::from_json(&rep.to_json())
                .map(|r| r.to_json() == rep.to_json())
                .unwrap_or(false);
            let ok = relations.passed && character.central && two == z_value.lift(two.level()) && round_trip;
            falsified |= !exists || !ok;
            let _ = writeln!(
                text,
                "constructed: K_{{{}}} ↦ {}  relations {}  central {}  η(K_λ^2ℓ) = z {}",
                weight_label(&lam, "λ"),
                rep.k(0).get(0, 0),
                if relations.passed { "pass" } else { "FAIL" },
                character.central,
                two == z_value.lift(two.level())
            );
            json!({
                "status": "constructed",
                "field_level": rep.level(),
                "relations": relations.passed,
                "central": character.central,
                "z_matches": two == z_value.lift(two.level()),
                "round_trip": round_trip,
                "representation": rep.to_json(),
            })
        }
        Err(RepError::NoSmallModule { .. }) => {
            falsified |= exists;
            json!({ "status": "none" })
        }
        Err(RepError::Lattice(LatticeError::NoCyclicGenerator(t))) => {
            let _ = writeln!(text, "construction not available for type {t}");
            json!({ "status": "unsupported" })
        }
        Err(e) => return Err(e.into()),
    };
    if falsified {
        text.push_str("MISMATCH between decision and construction\n");
    }
    let value = json!({
        "schema": "qroot/central-small",
        "schema_version": 1,
        "factors": factor_labels(&datum),
        "ell": ell,
        "m": m,
        "d": d,
        "z_order": z_order,
        "exists": exists,
        "construction": construction,
    });
    render(common.format, value, text, falsified)
}

pub fn dckp_table(ranks: &str, ells: &str, format: Format) -> Result<Outcome, CliError> {
    let ranks: Vec<u64> = parse_list(ranks)?;
    let ranks: Vec<usize> = ranks.into_iter().map(|r| r as usize).collect();
    let ells: Vec<u64> = parse_list(ells)?;
    for &n in &ranks {
        if n == 0 {
            return Err(CliError::Usage("ranks must be positive".into()));
        }
    }
    let rows = dckp_table_rows(&ranks, &ells)?;
    let falsified = rows.iter().any(|r| r.ends_with("\tfalsified"));
    let mut text = String::from(DCKP_TABLE_HEADER);
    text.push('\n');
    for r in &rows {
        text.push_str(r);
        text.push('\n');
    }
    let columns: Vec<&str> = DCKP_TABLE_HEADER.split('\t').collect();
    let objects: Vec<Value> = rows
        .iter()
        .map(|r| {
            Value::Object(
                columns
                    .iter()
                    .zip(r.split('\t'))
                    .map(|(k, v)| (k.to_string(), Value::String(v.to_string())))
                    .collect(),
            )
        })
        .collect();
    let value = json!({
        "schema": "qroot/dckp-table",
        "schema_version": 1,
        "columns": columns,
        "rows": objects,
    });
    render(format, value, text, falsified)
}
