use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, ValueEnum};
use qroot_core::lattice::{enumerate_intermediate_lattices, IsoLattice};
use qroot_core::rootdata::{Family, RootDatum, SimpleType};

use crate::commands::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Tsv,
    Text,
}

/// Options shared by the subcommands that work on one root datum.
#[derive(Args, Debug, Clone)]
pub struct CommonArgs {
    /// Cartan type letter (`A`…`G`) or a full label like `B2`; repeat
    /// together with `--rank` for semisimple data.
    #[arg(long = "type", short = 't')]
    pub types: Vec<String>,
    /// Rank for each `--type` given as a bare letter.
    #[arg(long = "rank", short = 'r')]
    pub ranks: Vec<usize>,
    /// The order ℓ of ε (odd, coprime to 3 with G2 factors).
    #[arg(long = "l")]
    pub ell: Option<u64>,
    /// `Q`, `L` (or `Λ`, `P`), or an index into the list printed by
    /// `lattices`.
    #[arg(long, default_value = "Q")]
    pub lattice: String,
    /// Field level `L` overriding the default for the command.
    #[arg(long)]
    pub level: Option<u32>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

impl CommonArgs {
    pub fn kinds(&self) -> Result<Vec<SimpleType>, CliError> {
        if self.types.is_empty() {
            return Err(CliError::Usage("--type is required".into()));
        }
        let mut ranks = self.ranks.iter();
        let mut out = Vec::with_capacity(self.types.len());
        for t in &self.types {
            let t = t.trim();
            let kind = if t.len() == 1 {
                let letter = t.chars().next().expect("nonempty");
                let family = Family::from_letter(letter)
                    .ok_or_else(|| CliError::Usage(format!("unknown Cartan type {t:?}")))?;
                let &rank = ranks
                    .next()
                    .ok_or_else(|| CliError::Usage(format!("--rank missing for type {t}")))?;
                SimpleType::new(family, rank)?
            } else {
                t.parse::<SimpleType>()?
            };
            out.push(kind);
        }
        if ranks.next().is_some() {
            return Err(CliError::Usage("more --rank values than bare --type letters".into()));
        }
        Ok(out)
    }

    pub fn datum(&self) -> Result<Arc<RootDatum>, CliError> {
        Ok(Arc::new(RootDatum::semisimple(&self.kinds()?)?))
    }

    pub fn ell(&self) -> Result<u64, CliError> {
        self.ell.ok_or_else(|| CliError::Usage("--l is required".into()))
    }

    pub fn lattice(&self, datum: &Arc<RootDatum>) -> Result<IsoLattice, CliError> {
        select_lattice(datum, &self.lattice)
    }
}

pub fn select_lattice(datum: &Arc<RootDatum>, selector: &str) -> Result<IsoLattice, CliError> {
    match selector.trim() {
        "Q" | "q" => Ok(IsoLattice::root_lattice(datum.clone())),
        "L" | "Λ" | "P" | "Lambda" | "lambda" => Ok(IsoLattice::weight_lattice(datum.clone())),
        s => {
            let index: usize = s
                .parse()
                .map_err(|_| CliError::Usage(format!("lattice selector {s:?} is not Q, L or an index")))?;
            let all = enumerate_intermediate_lattices(datum.clone());
            let count = all.len();
            all.into_iter()
                .nth(index)
                .ok_or_else(|| CliError::Usage(format!("lattice index {index} out of range (there are {count})")))
        }
    }
}

/// Parses `2..7` (inclusive), `3`, or `2,4,6`.
pub fn parse_list<T: std::str::FromStr + Copy + Into<u64> + TryFrom<u64>>(s: &str) -> Result<Vec<T>, CliError> {
    let bad = || CliError::Usage(format!("cannot parse list {s:?}"));
    let mut out = Vec::new();
    for item in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
        if let Some((a, b)) = item.split_once("..") {
            let a: u64 = a.trim().parse().map_err(|_| bad())?;
            let b: u64 = b.trim_start_matches('=').trim().parse().map_err(|_| bad())?;
            for v in a..=b {
                out.push(T::try_from(v).map_err(|_| bad())?);
            }
        } else {
            out.push(item.parse().map_err(|_| bad())?);
        }
    }
    if out.is_empty() {
        return Err(bad());
    }
    Ok(out)
}
