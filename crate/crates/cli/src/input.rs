use std::path::Path;

use qmalg_core::braidings::examples::flip;
use qmalg_core::ncalg::{parse_nc, Alphabet, NCPolynomial};
use qmalg_core::scalars::{Rational, RationalFunction as RF};
use qmalg_core::symmetrizers::genericity_guard;
use qmalg_core::tensorspace::{Matrix, TensorOperator};

use crate::args::QMode;
use crate::{CliError, CliResult};

/// Read a JSON matrix file, resolving relative paths against `base`.
pub fn load_operator(arg: &str, base: &Path) -> CliResult<TensorOperator> {
    let path = base.join(arg);
    let text = std::fs::read_to_string(&path).map_err(|source| CliError::Io { path: path.clone(), source })?;
    TensorOperator::from_json(&text).map_err(|source| CliError::Input { path, source })
}

/// Operators after applying the q-mode.
pub struct Loaded {
    pub r: TensorOperator,
    pub f: TensorOperator,
    pub f_is_r: bool,
    pub f_is_flip: bool,
}

pub fn load_pair(r_arg: &str, f_arg: &str, base: &Path, mode: &QMode) -> CliResult<Loaded> {
    let r = specialize_operator(&load_operator(r_arg, base)?, mode)?;
    let f = match f_arg {
        "re" => r.clone(),
        "rtt" => flip(r.dim()),
        path => specialize_operator(&load_operator(path, base)?, mode)?,
    };
    Ok(Loaded {
        f_is_r: f == r,
        f_is_flip: f == flip(r.dim()),
        r,
        f,
    })
}

fn specialize_scalar(x: &RF, q0: &Rational) -> CliResult<RF> {
    Ok(RF::from_rational(&x.specialize(q0)?))
}

/// In numeric mode, evaluate every entry at `q0`; symbolic operators pass through.
pub fn specialize_operator(op: &TensorOperator, mode: &QMode) -> CliResult<TensorOperator> {
    let QMode::Numeric(q0) = mode else {
        return Ok(op.clone());
    };
    // bound covers the recursions up to the default search depth
    genericity_guard(q0, 2 * (op.dim() as i64 + 2) + 2)?;
    let rows = op
        .matrix()
        .to_dense()
        .iter()
        .map(|row| row.iter().map(|x| specialize_scalar(x, q0)).collect::<CliResult<Vec<_>>>())
        .collect::<CliResult<Vec<_>>>()?;
    Ok(TensorOperator::new(op.dim(), op.sites(), Matrix::from_dense(rows)?)?)
}

pub fn parse_expr(src: &str, alphabet: &Alphabet, mode: &QMode) -> CliResult<NCPolynomial> {
    let p = parse_nc(src, alphabet)?;
    match mode {
        QMode::Symbolic => Ok(p),
        QMode::Numeric(q0) => {
            let terms = p
                .terms()
                .map(|(w, c)| Ok((w.clone(), specialize_scalar(c, q0)?)))
                .collect::<CliResult<Vec<_>>>()?;
            Ok(NCPolynomial::from_terms(terms))
        }
    }
}
