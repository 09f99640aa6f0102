//! Line-oriented model files.
//!
//! ```text
//! # comment
//! name lt
//! vars x1 x2 x3 X1 X2 X3
//! weights 1 1 1 1 1 1
//! poly W1 = x1^3 + x2^3 + x3^3 - 3*X1*X2*X3
//! poly W2 = X1^3 + X2^3 + X3^3 - 3*x1*x2*x3
//! group SL
//! ```
//!
//! `group` is one of `J`, `SL`, `MAX`, `GEN`. With `GEN`, each `gen` line
//! lists n x-phases followed by either r p-phases, `auto`, or nothing.
//! `degrees` is optional and cross-checked against the inferred degrees.

use thiserror::Error;

use crate::arith::Rational;
use crate::polycore::{
    parse_polynomial, GeneratorSpec, GroupSelector, ModelData, ParseError, PolyError, VarTable,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelFileError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Polynomial { line: usize, source: ParseError },
    #[error(transparent)]
    Model(#[from] PolyError),
}

fn syntax(line: usize, message: impl Into<String>) -> ModelFileError {
    ModelFileError::Syntax {
        line,
        message: message.into(),
    }
}

fn parse_rational(tok: &str, line: usize) -> Result<Rational, ModelFileError> {
    let bad = || syntax(line, format!("bad rational '{tok}'"));
    let q = match tok.split_once('/') {
        Some((a, b)) => {
            let a: num_bigint::BigInt = a.parse().map_err(|_| bad())?;
            let b: num_bigint::BigInt = b.parse().map_err(|_| bad())?;
            if b == num_bigint::BigInt::from(0) {
                return Err(bad());
            }
            Rational::new(a, b)
        }
        None => Rational::from_integer(tok.parse().map_err(|_| bad())?),
    };
    Ok(q)
}

fn parse_uints(rest: &str, line: usize) -> Result<Vec<u64>, ModelFileError> {
    rest.split_whitespace()
        .map(|t| {
            t.parse()
                .map_err(|_| syntax(line, format!("bad integer '{t}'")))
        })
        .collect()
}

pub fn parse_model_file(text: &str) -> Result<ModelData, ModelFileError> {
    let mut name: Option<String> = None;
    let mut vars: Option<(usize, Vec<String>)> = None;
    let mut weights: Option<(usize, Vec<u64>)> = None;
    let mut degrees: Option<Vec<u64>> = None;
    let mut polys: Vec<(usize, String)> = Vec::new();
    let mut group: Option<(usize, String)> = None;
    let mut gens: Vec<(usize, Vec<String>)> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, rest) = content
            .split_once(char::is_whitespace)
            .unwrap_or((content, ""));
        let rest = rest.trim();
        let once = |present: bool| {
            if present {
                Err(syntax(line, format!("duplicate key '{key}'")))
            } else {
                Ok(())
            }
        };
        match key {
            "name" => {
                once(name.is_some())?;
                if rest.is_empty() {
                    return Err(syntax(line, "empty name"));
                }
                name = Some(rest.to_string());
            }
            "vars" => {
                once(vars.is_some())?;
                let names: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
                for v in &names {
                    let ok = v.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
                        && v.chars().all(|c| c.is_ascii_alphanumeric());
                    if !ok {
                        return Err(syntax(line, format!("bad variable name '{v}'")));
                    }
                }
                vars = Some((line, names));
            }
            "weights" => {
                once(weights.is_some())?;
                weights = Some((line, parse_uints(rest, line)?));
            }
            "degrees" => {
                once(degrees.is_some())?;
                degrees = Some(parse_uints(rest, line)?);
            }
            "poly" => {
                let (_, expr) = rest
                    .split_once('=')
                    .ok_or_else(|| syntax(line, "expected 'poly <name> = <expr>'"))?;
                polys.push((line, expr.trim().to_string()));
            }
            "group" => {
                once(group.is_some())?;
                group = Some((line, rest.to_string()));
            }
            "gen" => gens.push((line, rest.split_whitespace().map(str::to_string).collect())),
            other => return Err(syntax(line, format!("unknown key '{other}'"))),
        }
    }

    let (_, xs) = vars.ok_or_else(|| syntax(0, "missing 'vars'"))?;
    let (wline, ws) = weights.ok_or_else(|| syntax(0, "missing 'weights'"))?;
    if ws.len() != xs.len() {
        return Err(syntax(
            wline,
            format!("{} weights for {} variables", ws.len(), xs.len()),
        ));
    }
    let r = polys.len();
    if r == 0 {
        return Err(syntax(0, "no 'poly' lines"));
    }
    let table = VarTable::with_default_p(xs.clone(), r);
    if let Some(clash) = table.p.iter().find(|p| xs.contains(p)) {
        return Err(syntax(0, format!("variable name '{clash}' is reserved")));
    }
    let xo = table.x_only();
    let mut parsed = Vec::with_capacity(r);
    for (line, expr) in &polys {
        let p = parse_polynomial(expr, &xo).map_err(|source| ModelFileError::Polynomial {
            line: *line,
            source,
        })?;
        parsed.push(p);
    }
    let n = xs.len();
    let selector = match group.as_ref().map(|(l, g)| (*l, g.as_str())) {
        Some((_, "J")) | None if gens.is_empty() => GroupSelector::J,
        Some((l, "J" | "SL" | "MAX")) if !gens.is_empty() => {
            return Err(syntax(l, "'gen' lines require 'group GEN'"));
        }
        Some((_, "SL")) => GroupSelector::SL,
        Some((_, "MAX")) => GroupSelector::Max,
        Some((_, "GEN")) | None => {
            let mut specs = Vec::new();
            for (line, toks) in &gens {
                if toks.len() < n {
                    return Err(syntax(*line, format!("expected {n} x-phases")));
                }
                let x = toks[..n]
                    .iter()
                    .map(|t| parse_rational(t, *line))
                    .collect::<Result<Vec<_>, _>>()?;
                let tail = &toks[n..];
                let p = match tail {
                    [] => None,
                    [a] if a == "auto" => None,
                    t if t.len() == r => Some(
                        t.iter()
                            .map(|s| parse_rational(s, *line))
                            .collect::<Result<Vec<_>, _>>()?,
                    ),
                    _ => return Err(syntax(*line, format!("expected {r} p-phases or 'auto'"))),
                };
                specs.push(GeneratorSpec { x, p });
            }
            GroupSelector::Generators(specs)
        }
        Some((l, other)) => return Err(syntax(l, format!("unknown group '{other}'"))),
    };
    let name = name.unwrap_or_else(|| "model".to_string());
    Ok(ModelData::new(name, table, ws, parsed, degrees, selector)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    const LT: &str = "name lt\nvars x1 x2 x3 X1 X2 X3\nweights 1 1 1 1 1 1\n\
        poly W1 = x1^3 + x2^3 + x3^3 - 3*X1*X2*X3\npoly W2 = X1^3 + X2^3 + X3^3 - 3*x1*x2*x3\n";

    #[test]
    fn parses_lt() {
        let m = parse_model_file(&format!("{LT}group SL # comment\n")).unwrap();
        assert_eq!(m.n(), 6);
        assert_eq!(m.r(), 2);
        assert_eq!(m.group, GroupSelector::SL);
        assert_eq!(m.vars.p, vec!["p1", "p2"]);
    }

    #[test]
    fn generators() {
        let m = parse_model_file(&format!(
            "{LT}group GEN\ngen 2/9 2/9 5/9 6/9 3/9 6/9 auto\ngen 0 0 0 1/3 1/3 1/3 0 0\n"
        ))
        .unwrap();
        match m.group {
            GroupSelector::Generators(g) => {
                assert_eq!(g.len(), 2);
                assert_eq!(g[0].x[2], rat(5, 9));
                assert_eq!(g[1].p, Some(vec![rat(0, 1), rat(0, 1)]));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rejects_bad_input() {
        let short = LT.replace("weights 1 1 1 1 1 1", "weights 1 1 1");
        assert!(matches!(
            parse_model_file(&short),
            Err(ModelFileError::Syntax { line: 3, .. })
        ));
        assert!(parse_model_file(&format!("{LT}colour blue\n")).is_err());
        assert!(parse_model_file(&format!("{LT}group XYZ\n")).is_err());
        assert!(parse_model_file(&format!("{LT}group SL\ngen 0 0 0 0 0 0\n")).is_err());
        let bad_poly = LT.replace("3*X1*X2*X3", "3*Y1");
        assert!(matches!(
            parse_model_file(&bad_poly),
            Err(ModelFileError::Polynomial { line: 4, .. })
        ));
        assert!(parse_model_file(&format!("{LT}degrees 3 4\n")).is_err());
    }
}
