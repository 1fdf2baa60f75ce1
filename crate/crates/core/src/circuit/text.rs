//! Line-oriented circuit format.
//!
//! ```text
//! QUBITS 2
//! PARAMS 2
//! RY 0 $0
//! RY 1 0.3
//! IsingZZ 0,1 2*$1
//! CNOT 0,1
//! MEASURE expval Z(0)*Z(1)
//! ```
//!
//! * `QUBITS n` comes first. `PARAMS k` is optional on input (defaults to one
//!   past the largest `$i`) and is printed whenever `k > 0`.
//! * A gate line is `NAME wires [angle]`, wires comma separated; the angle is a
//!   float literal, `$i`, or `scale*$i`.
//! * The tape ends with exactly one `MEASURE` line: `expval OBS`,
//!   `expvals OBS OBS …` or `probs i,j,…`, where `OBS` is a `*`-joined product
//!   of `X(i)`, `Y(i)`, `Z(i)` factors.
//! * Blank lines and lines starting with `#` are skipped.
//!
//! Printing is canonical: `print(parse(print(t))) == print(t)` byte for byte.
//! Tapes with an initial state or a Hermitian-matrix observable have no text form.

use std::fmt::Write as _;
use std::str::FromStr;

use super::{CircuitTape, MeasurementSpec, Operation, Param};
use crate::error::{Error, Result};
use crate::ops::{GateKind, Observable, Pauli};

impl CircuitTape {
    pub fn to_text(&self) -> Result<String> {
        if self.initial_state.is_some() {
            return Err(Error::Unsupported(
                "tapes with an initial state have no text form".into(),
            ));
        }
        let mut out = String::new();
        writeln!(out, "QUBITS {}", self.n_qubits).unwrap();
        if self.n_params > 0 {
            writeln!(out, "PARAMS {}", self.n_params).unwrap();
        }
        for op in &self.ops {
            write!(out, "{} {}", op.kind, join(&op.wires, ",")).unwrap();
            match op.param {
                None => {}
                Some(Param::Literal(v)) => write!(out, " {v}").unwrap(),
                Some(Param::Ref { index, scale: 1.0 }) => write!(out, " ${index}").unwrap(),
                Some(Param::Ref { index, scale }) => write!(out, " {scale}*${index}").unwrap(),
            }
            out.push('\n');
        }
        match &self.measurement {
            MeasurementSpec::Expval(o) => writeln!(out, "MEASURE expval {}", obs_text(o)?),
            MeasurementSpec::ExpvalList(list) => {
                let parts = list.iter().map(obs_text).collect::<Result<Vec<_>>>()?;
                writeln!(out, "MEASURE expvals {}", parts.join(" "))
            }
            MeasurementSpec::Probs(w) => writeln!(out, "MEASURE probs {}", join(w, ",")),
        }
        .unwrap();
        Ok(out)
    }
}

impl FromStr for CircuitTape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_tape(s)
    }
}

fn join(items: &[usize], sep: &str) -> String {
    items
        .iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join(sep)
}

fn obs_text(obs: &Observable) -> Result<String> {
    let factors = obs.pauli_factors().ok_or_else(|| {
        Error::Unsupported("Hermitian-matrix observables have no text form".into())
    })?;
    Ok(factors
        .iter()
        .map(|&(p, w)| format!("{}({w})", p.symbol()))
        .collect::<Vec<_>>()
        .join("*"))
}

pub fn parse_tape(text: &str) -> Result<CircuitTape> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let err = |line: usize, message: String| Error::Parse { line, message };

    let (ln, first) = lines
        .next()
        .ok_or_else(|| err(1, "empty circuit".into()))?;
    let n_qubits = match first.split_whitespace().collect::<Vec<_>>()[..] {
        ["QUBITS", n] => parse_num::<usize>(n, ln)?,
        _ => return Err(err(ln, format!("expected 'QUBITS n', got '{first}'"))),
    };

    let mut builder = CircuitTape::builder(n_qubits);
    let mut measurement = None;
    for (ln, line) in lines {
        if measurement.is_some() {
            return Err(err(ln, "content after MEASURE".into()));
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens[..] {
            ["PARAMS", k] => builder = builder.n_params(parse_num(k, ln)?),
            ["MEASURE", ref rest @ ..] => measurement = Some(parse_measure(rest, ln)?),
            [name, wires, ref rest @ ..] => {
                let kind = GateKind::from_str(name).map_err(|e| err(ln, e.to_string()))?;
                let wires = wires
                    .split(',')
                    .map(|w| parse_num::<usize>(w, ln))
                    .collect::<Result<Vec<_>>>()?;
                let param = match rest {
                    [] => None,
                    [p] => Some(parse_param(p, ln)?),
                    _ => return Err(err(ln, format!("trailing tokens in '{line}'"))),
                };
                builder = builder.op(Operation { kind, wires, param });
            }
            _ => return Err(err(ln, format!("cannot parse '{line}'"))),
        }
    }
    let measurement =
        measurement.ok_or_else(|| err(text.lines().count(), "missing MEASURE line".into()))?;
    builder.measure(measurement)
}

fn parse_num<T: FromStr>(s: &str, line: usize) -> Result<T> {
    s.parse().map_err(|_| Error::Parse {
        line,
        message: format!("invalid number '{s}'"),
    })
}

fn parse_param(s: &str, line: usize) -> Result<Param> {
    let parse_ref = |r: &str| parse_num::<usize>(r, line);
    if let Some((scale, r)) = s.split_once("*$") {
        return Ok(Param::Ref {
            index: parse_ref(r)?,
            scale: parse_num(scale, line)?,
        });
    }
    if let Some(r) = s.strip_prefix('$') {
        return Ok(Param::r#ref(parse_ref(r)?));
    }
    Ok(Param::Literal(parse_num(s, line)?))
}

fn parse_measure(tokens: &[&str], line: usize) -> Result<MeasurementSpec> {
    let err = |message: String| Error::Parse { line, message };
    match tokens {
        ["expval", obs] => Ok(MeasurementSpec::Expval(parse_obs(obs, line)?)),
        ["expvals", list @ ..] if !list.is_empty() => Ok(MeasurementSpec::ExpvalList(
            list.iter()
                .map(|o| parse_obs(o, line))
                .collect::<Result<_>>()?,
        )),
        ["probs", wires] => Ok(MeasurementSpec::Probs(
            wires
                .split(',')
                .map(|w| parse_num(w, line))
                .collect::<Result<_>>()?,
        )),
        _ => Err(err(format!("cannot parse measurement '{}'", tokens.join(" ")))),
    }
}

fn parse_obs(s: &str, line: usize) -> Result<Observable> {
    let factors = s
        .split('*')
        .map(|f| {
            let bad = || Error::Parse {
                line,
                message: format!("invalid observable factor '{f}'"),
            };
            let pauli = match f.chars().next() {
                Some('X') => Pauli::X,
                Some('Y') => Pauli::Y,
                Some('Z') => Pauli::Z,
                _ => return Err(bad()),
            };
            let wire = f[1..]
                .strip_prefix('(')
                .and_then(|r| r.strip_suffix(')'))
                .ok_or_else(bad)?;
            Ok((pauli, parse_num(wire, line)?))
        })
        .collect::<Result<Vec<_>>>()?;
    match factors[..] {
        [(Pauli::Z, w)] => Ok(Observable::PauliZ(w)),
        _ => Observable::tensor(factors).map_err(|e| Error::Parse {
            line,
            message: e.to_string(),
        }),
    }
}
