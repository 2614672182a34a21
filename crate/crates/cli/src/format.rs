//! The circuit v1 text format, bit-exact:
//!
//! ```text
//! circuit v1
//! field Q                      (or: field Q[u] mod <monic poly in u>)
//! nvars <n> [yvar <index>]
//! node <id> var <index>
//! node <id> const <Rational or [c0, c1, ...]>
//! node <id> <add|sub|mul|div> <id> <id>
//! output <id> [<id> ...]
//! ```
//!
//! Ids are dense integers in topological order; forward references are
//! rejected. Parse errors carry the offending line number.

use std::fmt::Write as _;
use std::sync::Arc;

use circfactor_core::circuit::{Circuit, CircuitBuilder, Node, NodeId};
use circfactor_core::field::{parse_u_poly, Field, NumberField, NumberFieldElem, Rational};

/// A circuit over either supported constant field.
#[derive(Clone, Debug)]
pub enum AnyCircuit {
    Q(Circuit<Rational>),
    Ext(Circuit<NumberFieldElem>),
}

impl AnyCircuit {
    pub fn nvars(&self) -> u32 {
        match self {
            AnyCircuit::Q(c) => c.nvars(),
            AnyCircuit::Ext(c) => c.nvars(),
        }
    }

    pub fn yvar(&self) -> Option<u32> {
        match self {
            AnyCircuit::Q(c) => c.yvar(),
            AnyCircuit::Ext(c) => c.yvar(),
        }
    }

    pub fn expect_q(self) -> Result<Circuit<Rational>, FormatError> {
        match self {
            AnyCircuit::Q(c) => Ok(c),
            AnyCircuit::Ext(_) => Err(FormatError {
                line: 0,
                message: "expected a circuit over Q".into(),
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormatError {
    /// 1-based line number; 0 when not tied to a line.
    pub line: usize,
    pub message: String,
}

impl std::fmt::Display for FormatError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.line > 0 {
            write!(f, "line {}: {}", self.line, self.message)
        } else {
            write!(f, "{}", self.message)
        }
    }
}

impl std::error::Error for FormatError {}

fn err(line: usize, message: impl Into<String>) -> FormatError {
    FormatError {
        line,
        message: message.into(),
    }
}

pub fn serialize_circuit(c: &AnyCircuit) -> String {
    match c {
        AnyCircuit::Q(c) => serialize_impl(c, "Q".to_string(), |k, out| {
            let _ = write!(out, "{k}");
        }),
        AnyCircuit::Ext(c) => {
            let header = format!("Q[u] mod {}", c.ctx().modulus_string());
            serialize_impl(c, header, |k, out| {
                let _ = write!(out, "{k}");
            })
        }
    }
}

fn serialize_impl<F: Field>(
    c: &Circuit<F>,
    field_header: String,
    write_const: impl Fn(&F, &mut String),
) -> String {
    let mut out = String::new();
    out.push_str("circuit v1\n");
    let _ = writeln!(out, "field {field_header}");
    match c.yvar() {
        Some(y) => {
            let _ = writeln!(out, "nvars {} yvar {}", c.nvars(), y);
        }
        None => {
            let _ = writeln!(out, "nvars {}", c.nvars());
        }
    }
    for (id, node) in c.nodes().iter().enumerate() {
        match node {
            Node::Var(v) => {
                let _ = writeln!(out, "node {id} var {v}");
            }
            Node::Const(k) => {
                let _ = write!(out, "node {id} const ");
                write_const(k, &mut out);
                out.push('\n');
            }
            Node::Add(l, r) => {
                let _ = writeln!(out, "node {id} add {l} {r}");
            }
            Node::Sub(l, r) => {
                let _ = writeln!(out, "node {id} sub {l} {r}");
            }
            Node::Mul(l, r) => {
                let _ = writeln!(out, "node {id} mul {l} {r}");
            }
            Node::Div(l, r) => {
                let _ = writeln!(out, "node {id} div {l} {r}");
            }
        }
    }
    out.push_str("output");
    for o in c.outputs() {
        let _ = write!(out, " {o}");
    }
    out.push('\n');
    out
}

enum FieldHeader {
    Q,
    Ext(Arc<NumberField>),
}

pub fn parse_circuit(text: &str) -> Result<AnyCircuit, FormatError> {
    let mut lines = text.lines().enumerate();

    let (ln, first) = lines.next().ok_or_else(|| err(1, "empty file"))?;
    if first.trim_end() != "circuit v1" {
        return Err(err(ln + 1, "expected header `circuit v1`"));
    }

    let (ln, field_line) = lines.next().ok_or_else(|| err(2, "missing field line"))?;
    let field_line = field_line.trim_end();
    let field = if field_line == "field Q" {
        FieldHeader::Q
    } else if let Some(rest) = field_line.strip_prefix("field Q[u] mod ") {
        let coeffs = parse_u_poly(rest).map_err(|e| err(ln + 1, format!("{e}")))?;
        let nf = NumberField::new_unchecked(coeffs).map_err(|e| err(ln + 1, format!("{e}")))?;
        FieldHeader::Ext(nf)
    } else {
        return Err(err(ln + 1, "expected `field Q` or `field Q[u] mod <poly>`"));
    };

    let (ln, nvars_line) = lines.next().ok_or_else(|| err(3, "missing nvars line"))?;
    let toks: Vec<&str> = nvars_line.split_whitespace().collect();
    let (nvars, yvar) = match toks.as_slice() {
        ["nvars", n] => (
            n.parse::<u32>().map_err(|_| err(ln + 1, "bad nvars"))?,
            None,
        ),
        ["nvars", n, "yvar", y] => (
            n.parse::<u32>().map_err(|_| err(ln + 1, "bad nvars"))?,
            Some(y.parse::<u32>().map_err(|_| err(ln + 1, "bad yvar"))?),
        ),
        _ => return Err(err(ln + 1, "expected `nvars <n> [yvar <i>]`")),
    };
    if let Some(y) = yvar {
        if y >= nvars {
            return Err(err(ln + 1, "yvar out of range"));
        }
    }

    match field {
        FieldHeader::Q => {
            let b = CircuitBuilder::<Rational>::new((), nvars);
            parse_body(lines, b, nvars, yvar, |tok, ln| {
                if tok.starts_with('[') {
                    Err(err(ln, "extension constant in a circuit over Q"))
                } else {
                    Rational::parse(tok).map_err(|e| err(ln, format!("{e}")))
                }
            })
            .map(AnyCircuit::Q)
        }
        FieldHeader::Ext(nf) => {
            let b = CircuitBuilder::<NumberFieldElem>::new(Arc::clone(&nf), nvars);
            let parent = nf;
            parse_body(lines, b, nvars, yvar, move |tok, ln| {
                parse_nf_elem(tok, &parent).map_err(|m| err(ln, m))
            })
            .map(AnyCircuit::Ext)
        }
    }
}

fn parse_nf_elem(tok: &str, parent: &Arc<NumberField>) -> Result<NumberFieldElem, String> {
    if let Some(inner) = tok.strip_prefix('[').and_then(|t| t.strip_suffix(']')) {
        let mut coeffs = Vec::new();
        for part in inner.split(',') {
            let part = part.trim();
            if part.is_empty() {
                return Err("empty coefficient".into());
            }
            coeffs.push(Rational::parse(part).map_err(|e| format!("{e}"))?);
        }
        if coeffs.len() != parent.degree() {
            return Err(format!(
                "expected {} coefficients, got {}",
                parent.degree(),
                coeffs.len()
            ));
        }
        Ok(parent.element(coeffs))
    } else {
        // Rationals embed.
        let r = Rational::parse(tok).map_err(|e| format!("{e}"))?;
        Ok(parent.from_rational(&r))
    }
}

fn parse_body<F: Field>(
    lines: std::iter::Enumerate<std::str::Lines<'_>>,
    mut b: CircuitBuilder<F>,
    nvars: u32,
    yvar: Option<u32>,
    parse_const: impl Fn(&str, usize) -> Result<F, FormatError>,
) -> Result<Circuit<F>, FormatError> {
    // The builder hash-conses, so a node line may map to an existing id;
    // serialized ids must stay dense, so keep an explicit translation.
    let mut ids: Vec<NodeId> = Vec::new();
    let mut outputs: Option<Vec<NodeId>> = None;
    for (ln0, raw) in lines {
        let ln = ln0 + 1;
        let line = raw.trim_end();
        if line.is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split(' ').collect();
        match toks.as_slice() {
            ["node", id, rest @ ..] => {
                if outputs.is_some() {
                    return Err(err(ln, "node after output line"));
                }
                let id: usize = id.parse().map_err(|_| err(ln, "bad node id"))?;
                if id != ids.len() {
                    return Err(err(ln, format!("expected dense id {}, got {id}", ids.len())));
                }
                let resolve = |tok: &str| -> Result<NodeId, FormatError> {
                    let k: usize = tok.parse().map_err(|_| err(ln, "bad child id"))?;
                    if k >= ids.len() {
                        return Err(err(ln, format!("forward reference to node {k}")));
                    }
                    Ok(ids[k])
                };
                let new_id = match rest {
                    ["var", v] => {
                        let v: u32 = v.parse().map_err(|_| err(ln, "bad variable index"))?;
                        if v >= nvars {
                            return Err(err(ln, "variable index out of range"));
                        }
                        b.var(v)
                    }
                    ["const", value] => {
                        let k = parse_const(value, ln)?;
                        b.constant(k)
                    }
                    ["const", v1, v2] => {
                        // Extension constants contain one space: "[a, b]".
                        let joined = format!("{v1} {v2}");
                        let k = parse_const(&joined, ln)?;
                        b.constant(k)
                    }
                    ["const", parts @ ..] => {
                        let joined = parts.join(" ");
                        let k = parse_const(&joined, ln)?;
                        b.constant(k)
                    }
                    [op @ ("add" | "sub" | "mul" | "div"), l, r] => {
                        let l = resolve(l)?;
                        let r = resolve(r)?;
                        match *op {
                            "add" => b.add(l, r),
                            "sub" => b.sub(l, r),
                            "mul" => b.mul(l, r),
                            _ => b.div(l, r),
                        }
                    }
                    [op, ..] => return Err(err(ln, format!("unknown opcode `{op}`"))),
                    [] => return Err(err(ln, "missing opcode")),
                };
                ids.push(new_id);
            }
            ["output", rest @ ..] => {
                if rest.is_empty() {
                    return Err(err(ln, "output line needs at least one id"));
                }
                let mut outs = Vec::with_capacity(rest.len());
                for tok in rest {
                    let k: usize = tok.parse().map_err(|_| err(ln, "bad output id"))?;
                    if k >= ids.len() {
                        return Err(err(ln, format!("output references unknown node {k}")));
                    }
                    outs.push(ids[k]);
                }
                outputs = Some(outs);
            }
            _ => return Err(err(ln, "expected `node ...` or `output ...`")),
        }
    }
    let outputs = outputs.ok_or_else(|| err(0, "missing output line"))?;
    Ok(b.finish(outputs).with_yvar(yvar))
}

/// Root files name a field and an element:
///
/// ```text
/// field Q
/// root 3/2
/// ```
///
/// or
///
/// ```text
/// field Q[u] mod u^2 - 2
/// root [0, 1]
/// ```
pub enum RootSpec {
    Q(Rational),
    Ext(Arc<NumberField>, NumberFieldElem),
}

pub fn parse_root_file(text: &str) -> Result<RootSpec, FormatError> {
    let mut lines = text.lines().enumerate();
    let (ln, field_line) = lines.next().ok_or_else(|| err(1, "empty root file"))?;
    let field_line = field_line.trim_end();
    let (ln2, root_line) = lines.next().ok_or_else(|| err(2, "missing root line"))?;
    let root_tok = root_line
        .trim_end()
        .strip_prefix("root ")
        .ok_or_else(|| err(ln2 + 1, "expected `root <value>`"))?;
    if field_line == "field Q" {
        let r = Rational::parse(root_tok).map_err(|e| err(ln2 + 1, format!("{e}")))?;
        Ok(RootSpec::Q(r))
    } else if let Some(rest) = field_line.strip_prefix("field Q[u] mod ") {
        let coeffs = parse_u_poly(rest).map_err(|e| err(ln + 1, format!("{e}")))?;
        let nf = NumberField::new_unchecked(coeffs).map_err(|e| err(ln + 1, format!("{e}")))?;
        let elem = parse_nf_elem(root_tok, &nf).map_err(|m| err(ln2 + 1, m))?;
        Ok(RootSpec::Ext(nf, elem))
    } else {
        Err(err(ln + 1, "expected `field Q` or `field Q[u] mod <poly>`"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use circfactor_core::circuit::CircuitBuilder;

    fn sample_q() -> AnyCircuit {
        let mut b = CircuitBuilder::<Rational>::new((), 2);
        let x0 = b.var(0);
        let x1 = b.var(1);
        let half = b.rat(&Rational::parse("1/2").unwrap());
        let m = b.mul(x0, x1);
        let s = b.add(m, half);
        let d = b.div(s, x0);
        AnyCircuit::Q(b.finish(vec![s, d]))
    }

    #[test]
    fn round_trip_q() {
        let c = sample_q();
        let text = serialize_circuit(&c);
        let parsed = parse_circuit(&text).unwrap();
        assert_eq!(serialize_circuit(&parsed), text);
    }

    #[test]
    fn round_trip_extension() {
        let nf = NumberField::new_unchecked(vec![
            Rational::from_int(-2),
            Rational::zero(),
            Rational::one(),
        ])
        .unwrap();
        let mut b = CircuitBuilder::<NumberFieldElem>::new(Arc::clone(&nf), 1);
        let u = b.constant(nf.generator());
        let x = b.var(0);
        let s = b.add(x, u);
        let c = AnyCircuit::Ext(b.finish_single(s).with_yvar(Some(0)));
        let text = serialize_circuit(&c);
        assert!(text.contains("field Q[u] mod u^2 - 2"));
        assert!(text.contains("const [0, 1]"));
        let parsed = parse_circuit(&text).unwrap();
        assert_eq!(serialize_circuit(&parsed), text);
    }

    #[test]
    fn rejects_malformed_input() {
        // unknown opcode
        let text = "circuit v1\nfield Q\nnvars 1\nnode 0 nor 0 0\noutput 0\n";
        let e = parse_circuit(text).unwrap_err();
        assert_eq!(e.line, 4);
        assert!(e.message.contains("unknown opcode"));

        // zero denominator constant
        let text = "circuit v1\nfield Q\nnvars 1\nnode 0 const 3/0\noutput 0\n";
        let e = parse_circuit(text).unwrap_err();
        assert_eq!(e.line, 4);

        // forward reference
        let text = "circuit v1\nfield Q\nnvars 1\nnode 0 add 1 1\noutput 0\n";
        let e = parse_circuit(text).unwrap_err();
        assert!(e.message.contains("forward reference"));

        // non-dense ids
        let text = "circuit v1\nfield Q\nnvars 1\nnode 1 var 0\noutput 1\n";
        let e = parse_circuit(text).unwrap_err();
        assert!(e.message.contains("dense"));
    }

    #[test]
    fn root_files() {
        match parse_root_file("field Q\nroot 5/3\n").unwrap() {
            RootSpec::Q(r) => assert_eq!(r, Rational::parse("5/3").unwrap()),
            _ => panic!("expected Q root"),
        }
        match parse_root_file("field Q[u] mod u^2 - 2\nroot [0, 1]\n").unwrap() {
            RootSpec::Ext(nf, e) => {
                assert_eq!(nf.degree(), 2);
                assert_eq!(e, nf.generator());
            }
            _ => panic!("expected extension root"),
        }
    }
}
