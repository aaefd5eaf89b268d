//! OpenQASM 2.0 interchange for basis-form circuits.

use std::fmt::Write as _;

use super::circuit::Circuit;
use super::gate::{Gate, GateOp};
use crate::error::{Error, Result};

pub const QASM_HEADER: &str = "OPENQASM 2.0;\ninclude \"qelib1.inc\";\n";

/// Serializes a basis-form circuit, measuring every qubit at the end.
///
/// Angles use the shortest decimal that parses back to the same `f64`, so
/// [`parse_qasm`] reproduces the op list exactly.
pub fn export_qasm(circuit: &Circuit) -> Result<String> {
    let n = circuit.n_qubits();
    let mut out = String::from(QASM_HEADER);
    let _ = writeln!(out, "qreg q[{n}];");
    let _ = writeln!(out, "creg c[{n}];");
    for op in circuit.ops() {
        match *op {
            GateOp::Single { gate, target } => match gate {
                Gate::Identity => writeln!(out, "id q[{target}];"),
                Gate::X => writeln!(out, "x q[{target}];"),
                Gate::SqrtX => writeln!(out, "sx q[{target}];"),
                Gate::Rz(phi) => writeln!(out, "rz({phi:?}) q[{target}];"),
                _ => return Err(Error::NotBasis(op.to_string())),
            },
            GateOp::Cnot { control, target } => writeln!(out, "cx q[{control}],q[{target}];"),
        }
        .expect("writing to a String cannot fail");
    }
    for q in 0..n {
        let _ = writeln!(out, "measure q[{q}] -> c[{q}];");
    }
    Ok(out)
}

fn qubit_ref(s: &str, line: usize) -> Result<usize> {
    let err = |msg: String| Error::Qasm { line, msg };
    let inner = s
        .trim()
        .strip_prefix("q[")
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| err(format!("expected q[<index>], found {s:?}")))?;
    inner
        .parse()
        .map_err(|_| err(format!("bad qubit index {inner:?}")))
}

fn register_size(rest: &str, name: &str, line: usize) -> Result<usize> {
    rest.trim()
        .strip_prefix(name)
        .and_then(|r| r.strip_prefix('['))
        .and_then(|r| r.strip_suffix(']'))
        .and_then(|r| r.parse().ok())
        .ok_or_else(|| Error::Qasm {
            line,
            msg: format!("malformed register declaration {rest:?}"),
        })
}

/// Parses the subset of OpenQASM 2.0 written by [`export_qasm`].
///
/// Measurements and the classical register are accepted and dropped.
pub fn parse_qasm(text: &str) -> Result<Circuit> {
    let mut circuit: Option<Circuit> = None;
    let mut saw_header = false;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let err = |msg: String| Error::Qasm { line: line_no, msg };
        let line = raw.split("//").next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let stmt = line
            .strip_suffix(';')
            .ok_or_else(|| err("missing ';'".into()))?
            .trim();
        if stmt == "OPENQASM 2.0" {
            saw_header = true;
            continue;
        }
        if !saw_header {
            return Err(err("expected OPENQASM 2.0 header".into()));
        }
        if stmt.starts_with("include") {
            continue;
        }
        if let Some(rest) = stmt.strip_prefix("qreg") {
            if circuit.is_some() {
                return Err(err("only one qreg is supported".into()));
            }
            circuit = Some(Circuit::new(register_size(rest, "q", line_no)?)?);
            continue;
        }
        if let Some(rest) = stmt.strip_prefix("creg") {
            register_size(rest, "c", line_no)?;
            continue;
        }
        let c = circuit
            .as_mut()
            .ok_or_else(|| err("gate before qreg declaration".into()))?;
        if stmt.starts_with("measure") {
            continue;
        }
        let (name, args) = stmt
            .split_once(char::is_whitespace)
            .ok_or_else(|| err(format!("malformed statement {stmt:?}")))?;
        let op = if let Some(angle) = name.strip_prefix("rz(").and_then(|r| r.strip_suffix(')')) {
            let phi: f64 = angle
                .trim()
                .parse()
                .map_err(|_| err(format!("bad angle {angle:?}")))?;
            GateOp::rz(qubit_ref(args, line_no)?, phi)
        } else {
            match name {
                "id" => GateOp::id(qubit_ref(args, line_no)?),
                "x" => GateOp::x(qubit_ref(args, line_no)?),
                "sx" => GateOp::sx(qubit_ref(args, line_no)?),
                "cx" => {
                    let (a, b) = args
                        .split_once(',')
                        .ok_or_else(|| err("cx needs two operands".into()))?;
                    GateOp::cnot(qubit_ref(a, line_no)?, qubit_ref(b, line_no)?)
                }
                other => return Err(err(format!("unsupported gate {other:?}"))),
            }
        };
        c.push(op).map_err(|e| err(e.to_string()))?;
    }
    circuit.ok_or(Error::Qasm {
        line: 0,
        msg: "no qreg declaration".into(),
    })
}
