//! Reading symbol files of any kind and converting between kinds.

use std::path::Path;

use fockcalc::quantize::{NormalOrderedOp, NOPS_TAG};
use fockcalc::symalg::{AwSymbol, Poly, SymbolRecord, WeylSymbol, WickSymbol};
use fockcalc::symmaps::{antiwick_to_wick, weyl_to_wick, wick_to_weyl};

use crate::CliError;

pub enum Input {
    Wick(WickSymbol),
    Weyl(WeylSymbol),
    AntiWick(AwSymbol),
    Operator(NormalOrderedOp),
}

impl Input {
    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Malformed(format!("{}: {e}", path.display())))?;
        let rec = SymbolRecord::from_json(&text)?;
        Ok(match rec.kind.as_str() {
            "wick" => Self::Wick(Poly::from_record(&rec)?),
            "weyl" => Self::Weyl(Poly::from_record(&rec)?),
            "aw" => Self::AntiWick(Poly::from_record(&rec)?),
            k if k == NOPS_TAG => Self::Operator(NormalOrderedOp::from_record(&rec)?),
            other => return Err(CliError::Malformed(format!("unknown symbol kind {other:?}"))),
        })
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Self::Wick(_) => "wick",
            Self::Weyl(_) => "weyl",
            Self::AntiWick(_) => "aw",
            Self::Operator(_) => NOPS_TAG,
        }
    }

    /// Wick symbol of the operator this input denotes.
    pub fn to_wick(&self) -> Result<WickSymbol, CliError> {
        Ok(match self {
            Self::Wick(a) => a.clone(),
            Self::Weyl(w) => weyl_to_wick(w)?,
            Self::AntiWick(a0) => antiwick_to_wick(a0),
            Self::Operator(op) => op.wick_symbol(),
        })
    }

    pub fn to_weyl(&self) -> Result<WeylSymbol, CliError> {
        match self {
            Self::Weyl(w) => Ok(w.clone()),
            other => Ok(wick_to_weyl(&other.to_wick()?)),
        }
    }
}

pub fn expect_kind(input: &Input, kind: &str, command: &str) -> Result<(), CliError> {
    if input.kind() == kind {
        Ok(())
    } else {
        Err(CliError::Malformed(format!("`{command}` needs kind {kind:?}, got {:?}", input.kind())))
    }
}
