//! Model JSON: `kind`, `clock`, optional `Ts`, sizes `n`, `m`, `p`, and row-major matrices.

use std::path::Path;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::real_part;
use crate::lti::{Clock, DescriptorSystem, PHForm};

type Rows = Vec<Vec<f64>>;

#[derive(Debug, Serialize, Deserialize)]
struct ModelFile {
    kind: String,
    clock: String,
    #[serde(rename = "Ts", default, skip_serializing_if = "Option::is_none")]
    ts: Option<f64>,
    n: usize,
    m: usize,
    p: usize,
    #[serde(rename = "E", default, skip_serializing_if = "Option::is_none")]
    e: Option<Rows>,
    #[serde(rename = "A", default, skip_serializing_if = "Option::is_none")]
    a: Option<Rows>,
    #[serde(rename = "B", default, skip_serializing_if = "Option::is_none")]
    b: Option<Rows>,
    #[serde(rename = "C", default, skip_serializing_if = "Option::is_none")]
    c: Option<Rows>,
    #[serde(rename = "D", default, skip_serializing_if = "Option::is_none")]
    d: Option<Rows>,
    #[serde(rename = "J", default, skip_serializing_if = "Option::is_none")]
    j: Option<Rows>,
    #[serde(rename = "R", default, skip_serializing_if = "Option::is_none")]
    r: Option<Rows>,
    #[serde(rename = "Q", default, skip_serializing_if = "Option::is_none")]
    q: Option<Rows>,
    #[serde(rename = "F", default, skip_serializing_if = "Option::is_none")]
    f: Option<Rows>,
    #[serde(rename = "P", default, skip_serializing_if = "Option::is_none")]
    pp: Option<Rows>,
    #[serde(rename = "S", default, skip_serializing_if = "Option::is_none")]
    s: Option<Rows>,
    #[serde(rename = "N", default, skip_serializing_if = "Option::is_none")]
    nn: Option<Rows>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    Descriptor(DescriptorSystem),
    Ph(PHForm),
}

impl Model {
    pub fn to_descriptor(&self) -> Result<DescriptorSystem> {
        match self {
            Model::Descriptor(sys) => Ok(sys.clone()),
            Model::Ph(ph) => ph.to_descriptor(),
        }
    }
}

fn rows(m: &DMatrix<f64>) -> Rows {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

fn matrix(name: &str, data: &Option<Rows>, shape: (usize, usize)) -> Result<DMatrix<f64>> {
    let data = data
        .as_ref()
        .ok_or_else(|| Error::Format(format!("model is missing matrix {name}")))?;
    let (nr, nc) = shape;
    // Matrices with no rows serialize as `[]`, whatever their column count.
    if nr == 0 && data.is_empty() {
        return Ok(DMatrix::zeros(0, nc));
    }
    if data.len() != nr || data.iter().any(|r| r.len() != nc) {
        return Err(Error::Format(format!("matrix {name} is not {nr}x{nc}")));
    }
    Ok(DMatrix::from_fn(nr, nc, |i, j| data[i][j]))
}

pub fn descriptor_to_json(sys: &DescriptorSystem) -> Result<String> {
    if !sys.is_real() {
        return Err(Error::Format("only real models can be written".into()));
    }
    let (clock, ts) = match sys.clock {
        Clock::Continuous => ("continuous", None),
        Clock::Discrete { ts } => ("discrete", Some(ts)),
    };
    let file = ModelFile {
        kind: "descriptor".into(),
        clock: clock.into(),
        ts,
        n: sys.order(),
        m: sys.inputs(),
        p: sys.outputs(),
        e: Some(rows(&real_part(&sys.e))),
        a: Some(rows(&real_part(&sys.a))),
        b: Some(rows(&real_part(&sys.b))),
        c: Some(rows(&real_part(&sys.c))),
        d: Some(rows(&real_part(&sys.d))),
        j: None,
        r: None,
        q: None,
        f: None,
        pp: None,
        s: None,
        nn: None,
    };
    Ok(serde_json::to_string_pretty(&file)?)
}

pub fn ph_to_json(ph: &PHForm) -> Result<String> {
    ph.check_dimensions()?;
    let m = ph.ports();
    let file = ModelFile {
        kind: "ph".into(),
        clock: "continuous".into(),
        ts: None,
        n: ph.order(),
        m,
        p: m,
        e: None,
        a: None,
        b: None,
        c: None,
        d: None,
        j: Some(rows(&ph.j)),
        r: Some(rows(&ph.r)),
        q: Some(rows(&ph.q)),
        f: Some(rows(&ph.f)),
        pp: Some(rows(&ph.p)),
        s: Some(rows(&ph.s)),
        nn: Some(rows(&ph.n)),
    };
    Ok(serde_json::to_string_pretty(&file)?)
}

pub fn model_to_json(model: &Model) -> Result<String> {
    match model {
        Model::Descriptor(sys) => descriptor_to_json(sys),
        Model::Ph(ph) => ph_to_json(ph),
    }
}

pub fn model_from_json(text: &str) -> Result<Model> {
    let f: ModelFile = serde_json::from_str(text)?;
    let (n, m, p) = (f.n, f.m, f.p);
    let clock = match (f.clock.as_str(), f.ts) {
        ("continuous", _) => Clock::Continuous,
        ("discrete", Some(ts)) => Clock::Discrete { ts },
        ("discrete", None) => return Err(Error::Format("discrete model without Ts".into())),
        (other, _) => return Err(Error::Format(format!("unknown clock {other:?}"))),
    };
    match f.kind.as_str() {
        "descriptor" => Ok(Model::Descriptor(DescriptorSystem::from_real(
            &matrix("E", &f.e, (n, n))?,
            &matrix("A", &f.a, (n, n))?,
            &matrix("B", &f.b, (n, m))?,
            &matrix("C", &f.c, (p, n))?,
            &matrix("D", &f.d, (p, m))?,
            clock,
        )?)),
        "ph" => {
            if clock != Clock::Continuous || m != p {
                return Err(Error::Format("pH models are continuous with m = p".into()));
            }
            Ok(Model::Ph(PHForm {
                j: matrix("J", &f.j, (n, n))?,
                r: matrix("R", &f.r, (n, n))?,
                q: matrix("Q", &f.q, (n, n))?,
                f: matrix("F", &f.f, (n, m))?,
                p: matrix("P", &f.pp, (n, m))?,
                s: matrix("S", &f.s, (m, m))?,
                n: matrix("N", &f.nn, (m, m))?,
            }))
        }
        other => Err(Error::Format(format!("unknown model kind {other:?}"))),
    }
}

pub fn write_model(path: impl AsRef<Path>, model: &Model) -> Result<()> {
    std::fs::write(path, model_to_json(model)? + "\n")?;
    Ok(())
}

pub fn read_model(path: impl AsRef<Path>) -> Result<Model> {
    model_from_json(&std::fs::read_to_string(path)?)
}
