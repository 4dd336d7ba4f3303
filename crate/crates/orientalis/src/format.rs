//! JSON encodings of operators, chains and certificates.
//!
//! Certificates are JSON lines: one header object, then one object per step,
//! so large certificates can be streamed.

use std::io::{BufRead, Write};

use orientalis_core::certificate::{CertStep, Certificate, JoinOrder, StepKind};
use orientalis_core::{parse_chain, Chain, Operator};
use serde::{Deserialize, Serialize};

pub const CERTIFICATE_FORMAT: &str = "orientalis-certificate";
pub const GENERATOR: &str = concat!("orientalis ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("line {line}: {source}")]
    Json {
        line: usize,
        #[source]
        source: serde_json::Error,
    },
    #[error("line {line}: {message}")]
    Invalid { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl FormatError {
    fn invalid(line: usize, message: impl Into<String>) -> Self {
        FormatError::Invalid {
            line,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperatorJson {
    pub values: Vec<usize>,
    pub target: usize,
}

impl From<&Operator> for OperatorJson {
    fn from(op: &Operator) -> Self {
        OperatorJson {
            values: op.values().iter().map(|&v| v as usize).collect(),
            target: op.target(),
        }
    }
}

impl TryFrom<&OperatorJson> for Operator {
    type Error = orientalis_core::Error;

    fn try_from(j: &OperatorJson) -> Result<Self, Self::Error> {
        Operator::new(&j.values, j.target)
    }
}

/// `{"m": .., "n": .., "terms": [[coefficient, [values]], ..]}` with terms
/// sorted by operator.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainJson {
    pub m: usize,
    pub n: usize,
    pub terms: Vec<(i64, Vec<usize>)>,
}

impl From<&Chain> for ChainJson {
    fn from(x: &Chain) -> Self {
        ChainJson {
            m: x.dim(),
            n: x.target(),
            terms: x
                .terms()
                .iter()
                .map(|(op, c)| (*c, op.values().iter().map(|&v| v as usize).collect()))
                .collect(),
        }
    }
}

impl TryFrom<&ChainJson> for Chain {
    type Error = orientalis_core::Error;

    fn try_from(j: &ChainJson) -> Result<Self, Self::Error> {
        let terms = j
            .terms
            .iter()
            .map(|(c, v)| Operator::new(v, j.n).map(|op| (*c, op)))
            .collect::<Result<Vec<_>, _>>()?;
        Chain::new(j.m, j.n, terms)
    }
}

pub fn chain_to_value(x: &Chain) -> serde_json::Value {
    serde_json::to_value(ChainJson::from(x)).expect("chains serialize")
}

/// Reads a chain given as a JSON object, a JSON string holding a literal,
/// or a bare literal such as `(0,1)-(1,1)+(1,2)`. `n` is required for
/// literals and must match the object's `n` when both are present.
pub fn parse_chain_input(text: &str, n: Option<usize>) -> Result<Chain, String> {
    let text = text.trim();
    let literal = |s: &str| match n {
        Some(n) => parse_chain(s, n).map_err(|e| format!("cannot parse chain {s:?}: {e}")),
        None => Err("--n is required for chain literals".to_string()),
    };
    if text.starts_with('{') {
        let j: ChainJson = serde_json::from_str(text).map_err(|e| format!("bad chain JSON: {e}"))?;
        if let Some(n) = n {
            if n != j.n {
                return Err(format!("chain has n = {}, expected {n}", j.n));
            }
        }
        return Chain::try_from(&j).map_err(|e| format!("bad chain: {e}"));
    }
    if text.starts_with('"') {
        let s: String = serde_json::from_str(text).map_err(|e| format!("bad JSON string: {e}"))?;
        return literal(&s);
    }
    literal(text)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Header {
    pub format: String,
    pub generator: String,
    pub n: usize,
    pub max_dim: usize,
    pub join_order: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepJson {
    pub step: String,
    pub m: usize,
    pub k: usize,
    pub w: ChainJson,
}

impl From<&CertStep> for StepJson {
    fn from(s: &CertStep) -> Self {
        StepJson {
            step: s.kind.name().to_string(),
            m: s.m,
            k: s.k,
            w: ChainJson::from(&s.w),
        }
    }
}

fn order_name(order: JoinOrder) -> &'static str {
    match order {
        JoinOrder::Interleaved => "interleaved",
        JoinOrder::OriginalsFirst => "originals-first",
    }
}

pub fn write_certificate<W: Write>(mut out: W, cert: &Certificate) -> std::io::Result<()> {
    let header = Header {
        format: CERTIFICATE_FORMAT.to_string(),
        generator: GENERATOR.to_string(),
        n: cert.n,
        max_dim: cert.max_dim,
        join_order: order_name(cert.join_order).to_string(),
    };
    serde_json::to_writer(&mut out, &header)?;
    out.write_all(b"\n")?;
    for step in &cert.steps {
        serde_json::to_writer(&mut out, &StepJson::from(step))?;
        out.write_all(b"\n")?;
    }
    out.flush()
}

fn step_from_json(line: usize, j: &StepJson, n: usize) -> Result<CertStep, FormatError> {
    let kind = match j.step.as_str() {
        "horn" => StepKind::Horn,
        "thin" => StepKind::Thin,
        other => return Err(FormatError::invalid(line, format!("unknown step kind {other:?}"))),
    };
    if j.w.n != n {
        return Err(FormatError::invalid(line, format!("step targets n = {}, header says {n}", j.w.n)));
    }
    let w = Chain::try_from(&j.w).map_err(|e| FormatError::invalid(line, e.to_string()))?;
    Ok(CertStep {
        kind,
        m: j.m,
        k: j.k,
        w,
    })
}

/// Streams a certificate from JSON lines. Blank lines are skipped.
pub fn read_certificate<R: BufRead>(input: R) -> Result<Certificate, FormatError> {
    let mut header: Option<Header> = None;
    let mut steps = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line_no = i + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        match &header {
            None => {
                let h: Header = serde_json::from_str(&line).map_err(|source| FormatError::Json {
                    line: line_no,
                    source,
                })?;
                if h.format != CERTIFICATE_FORMAT {
                    return Err(FormatError::invalid(line_no, format!("unknown format {:?}", h.format)));
                }
                header = Some(h);
            }
            Some(h) => {
                let j: StepJson = serde_json::from_str(&line).map_err(|source| FormatError::Json {
                    line: line_no,
                    source,
                })?;
                steps.push(step_from_json(line_no, &j, h.n)?);
            }
        }
    }
    let h = header.ok_or_else(|| FormatError::invalid(0, "missing header line"))?;
    let join_order = match h.join_order.as_str() {
        "originals-first" => JoinOrder::OriginalsFirst,
        _ => JoinOrder::Interleaved,
    };
    Ok(Certificate {
        n: h.n,
        max_dim: h.max_dim,
        steps,
        join_order,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use orientalis_core::anodyne::generate_certificate;

    #[test]
    fn chain_json_shape() {
        let x = parse_chain("(0,1)-(1,1)+(1,2)", 2).unwrap();
        let v = chain_to_value(&x);
        assert_eq!(
            v,
            serde_json::json!({"m": 1, "n": 2, "terms": [[1, [0, 1]], [-1, [1, 1]], [1, [1, 2]]]})
        );
        let back: ChainJson = serde_json::from_value(v).unwrap();
        assert_eq!(Chain::try_from(&back).unwrap(), x);
    }

    #[test]
    fn operator_json_shape() {
        let op = Operator::new(&[0, 1, 1, 3], 3).unwrap();
        let j = OperatorJson::from(&op);
        assert_eq!(serde_json::to_string(&j).unwrap(), r#"{"values":[0,1,1,3],"target":3}"#);
        assert_eq!(Operator::try_from(&j).unwrap(), op);
    }

    #[test]
    fn chain_inputs() {
        let x = parse_chain("(0,1)-(1,1)+(1,2)", 2).unwrap();
        assert_eq!(parse_chain_input("(0,1)-(1,1)+(1,2)\n", Some(2)).unwrap(), x);
        assert_eq!(parse_chain_input("\"(0,1)-(1,1)+(1,2)\"", Some(2)).unwrap(), x);
        let json = serde_json::to_string(&ChainJson::from(&x)).unwrap();
        assert_eq!(parse_chain_input(&json, None).unwrap(), x);
        assert!(parse_chain_input(&json, Some(3)).is_err());
        assert!(parse_chain_input("(0,1)", None).is_err());
        assert!(parse_chain_input("(0,3)", Some(2)).is_err());
    }

    #[test]
    fn certificate_round_trip() {
        let cert = generate_certificate(3, 4).unwrap();
        let mut buf = Vec::new();
        write_certificate(&mut buf, &cert).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert_eq!(text.lines().count(), cert.steps.len() + 1);
        assert!(text.lines().nth(1).unwrap().starts_with(r#"{"step":"horn","m":"#));
        assert_eq!(read_certificate(&buf[..]).unwrap(), cert);
    }

    #[test]
    fn certificate_errors() {
        assert!(matches!(read_certificate(&b""[..]), Err(FormatError::Invalid { .. })));
        let bad = b"{\"format\":\"orientalis-certificate\",\"generator\":\"x\",\"n\":1,\"max_dim\":2,\"join_order\":\"interleaved\"}\n{\"step\":\"jump\",\"m\":2,\"k\":1,\"w\":{\"m\":2,\"n\":1,\"terms\":[[1,[0,0,1]]]}}\n";
        match read_certificate(&bad[..]) {
            Err(FormatError::Invalid { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(read_certificate(&b"not json\n"[..]), Err(FormatError::Json { line: 1, .. })));
    }
}
