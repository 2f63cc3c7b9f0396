//! JSON channel descriptors.
//!
//! ```json
//! {"kind": "depolarizing", "p": 0.5, "dim_in": 2, "dim_out": 2}
//! {"kind": "kraus", "dim_in": 2, "dim_out": 2, "matrices": [[[[1,0],[0,0]],[[0,0],[1,0]]]]}
//! ```
//!
//! Complex entries are `[re, im]` pairs; a matrix is a list of rows.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{
    depolarizing, erasure, maximal_replacement, measure_and_prepare, replacement,
    stochastic_damping, unitary, ChoiMatrix, PovmEnsemble, QuantumChannel,
};
use crate::error::{Error, Result};
use crate::linalg::{BipartiteShape, ComplexMatrix, DensityOperator, HermitianOperator};

pub type JsonMatrix = Vec<Vec<[f64; 2]>>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChannelKind {
    Depolarizing,
    Unitary,
    Replacement,
    Damping,
    Erasure,
    Kraus,
    Choi,
    MeasurePrepare,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelDescriptor {
    pub kind: ChannelKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim_in: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim_out: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrices: Option<Vec<JsonMatrix>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

/// Converts a list of `[re, im]` rows into a matrix.
pub fn parse_matrix(rows: &JsonMatrix) -> Result<ComplexMatrix> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    if nrows == 0 || ncols == 0 {
        return Err(Error::Descriptor("empty matrix".into()));
    }
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::Descriptor("ragged matrix rows".into()));
    }
    let m = ComplexMatrix::from_fn(nrows, ncols, |r, c| {
        let [re, im] = rows[r][c];
        Complex64::new(re, im)
    });
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    Ok(m)
}

impl ChannelDescriptor {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Descriptor(e.to_string()))
    }

    pub fn simple(kind: ChannelKind, p: f64) -> Self {
        Self {
            kind,
            p: Some(p),
            dim_in: None,
            dim_out: None,
            matrices: None,
            label: None,
        }
    }

    fn param(&self) -> Result<f64> {
        self.p
            .ok_or_else(|| Error::Descriptor(format!("{:?} channel requires \"p\"", self.kind)))
    }

    fn matrices(&self) -> Result<Vec<ComplexMatrix>> {
        let ms = self.matrices.as_ref().ok_or_else(|| {
            Error::Descriptor(format!("{:?} channel requires \"matrices\"", self.kind))
        })?;
        if ms.is_empty() {
            return Err(Error::Descriptor("\"matrices\" is empty".into()));
        }
        ms.iter().map(parse_matrix).collect()
    }

    fn check_dims(&self, dim_in: usize, dim_out: usize) -> Result<()> {
        let bad = |given: Option<usize>, actual: usize| given.is_some_and(|g| g != actual);
        if bad(self.dim_in, dim_in) || bad(self.dim_out, dim_out) {
            return Err(Error::DimensionMismatch(format!(
                "descriptor declares {:?}→{:?} but the channel is {dim_in}→{dim_out}",
                self.dim_in, self.dim_out
            )));
        }
        Ok(())
    }

    /// Builds and validates the described channel.
    pub fn to_channel(&self) -> Result<QuantumChannel> {
        let channel = match self.kind {
            ChannelKind::Depolarizing => depolarizing(self.dim_in.unwrap_or(2), self.param()?)?,
            ChannelKind::Damping => stochastic_damping(self.param()?)?,
            ChannelKind::Erasure => erasure(self.param()?)?,
            ChannelKind::Unitary => {
                let ms = self.matrices()?;
                unitary(ms[0].clone())?
            }
            ChannelKind::Replacement => match &self.matrices {
                Some(_) => {
                    let sigma = DensityOperator::new(self.matrices()?.swap_remove(0))?;
                    replacement(self.dim_in.unwrap_or(sigma.dim()), &sigma)
                }
                None => {
                    let din = self.dim_in.unwrap_or(2);
                    maximal_replacement(din, self.dim_out.unwrap_or(din))
                }
            },
            ChannelKind::Kraus => {
                let ms = self.matrices()?;
                let (dout, din) = ms[0].shape();
                QuantumChannel::from_kraus(din, dout, ms, "kraus")?
            }
            ChannelKind::Choi => {
                let m = self.matrices()?.swap_remove(0);
                let din = self
                    .dim_in
                    .ok_or_else(|| Error::Descriptor("choi channel requires \"dim_in\"".into()))?;
                if din == 0 || m.nrows() % din != 0 {
                    return Err(Error::DimensionMismatch(format!(
                        "Choi matrix of size {} incompatible with dim_in {din}",
                        m.nrows()
                    )));
                }
                let shape = BipartiteShape::new(din, m.nrows() / din);
                QuantumChannel::from_choi(ChoiMatrix::new(shape, m)?, "choi")
            }
            ChannelKind::MeasurePrepare => {
                // First half effects, second half preparations.
                let ms = self.matrices()?;
                if ms.len() % 2 != 0 {
                    return Err(Error::Descriptor(
                        "measure_prepare needs an even number of matrices".into(),
                    ));
                }
                let (effects, states) = ms.split_at(ms.len() / 2);
                let effects = effects
                    .iter()
                    .map(|m| HermitianOperator::new(m.clone()))
                    .collect::<Result<Vec<_>>>()?;
                let states = states
                    .iter()
                    .map(|m| DensityOperator::new(m.clone()))
                    .collect::<Result<Vec<_>>>()?;
                measure_and_prepare(&PovmEnsemble::new(effects, states)?)
            }
        };
        self.check_dims(channel.dim_in(), channel.dim_out())?;
        Ok(match &self.label {
            Some(l) => channel.with_label(l.clone()),
            None => channel,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{completely_dephasing, identity_channel};

    #[test]
    fn parses_simple_kinds() {
        let d = ChannelDescriptor::from_json(
            r#"{"kind":"depolarizing","p":0.5,"dim_in":2,"dim_out":2}"#,
        )
        .unwrap();
        let c = d.to_channel().unwrap();
        assert_eq!(c.choi(), depolarizing(2, 0.5).unwrap().choi());

        let e = ChannelDescriptor::from_json(r#"{"kind":"erasure","p":0.2}"#).unwrap();
        assert_eq!(e.to_channel().unwrap().dim_out(), 3);
    }

    #[test]
    fn parses_kraus_with_fidelity() {
        let x = 0.123456789012345_f64;
        let y = (1.0 - x * x).sqrt();
        let text = format!(
            r#"{{"kind":"kraus","dim_in":2,"dim_out":2,"matrices":[[[[{x},0],[0,0]],[[0,0],[{x},0]]],[[[{y},0],[0,0]],[[0,0],[0,{y}]]]]}}"#
        );
        let c = ChannelDescriptor::from_json(&text)
            .unwrap()
            .to_channel()
            .unwrap();
        let k = c.kraus();
        assert!((k[0][(0, 0)].re - x).abs() < 1e-15);
        assert!((k[1][(1, 1)].im - y).abs() < 1e-15);
    }

    #[test]
    fn measure_prepare_descriptor() {
        let text = r#"{"kind":"measure_prepare","matrices":[
            [[[1,0],[0,0]],[[0,0],[0,0]]], [[[0,0],[0,0]],[[0,0],[1,0]]],
            [[[1,0],[0,0]],[[0,0],[0,0]]], [[[0,0],[0,0]],[[0,0],[1,0]]]]}"#;
        let c = ChannelDescriptor::from_json(text)
            .unwrap()
            .to_channel()
            .unwrap();
        assert!((c.choi().matrix() - completely_dephasing(2).choi().matrix()).norm() < 1e-14);
    }

    #[test]
    fn choi_descriptor() {
        let text = r#"{"kind":"choi","dim_in":2,"dim_out":2,"matrices":[[
            [[0.5,0],[0,0],[0,0],[0.5,0]],
            [[0,0],[0,0],[0,0],[0,0]],
            [[0,0],[0,0],[0,0],[0,0]],
            [[0.5,0],[0,0],[0,0],[0.5,0]]]]}"#;
        let c = ChannelDescriptor::from_json(text)
            .unwrap()
            .to_channel()
            .unwrap();
        assert!((c.choi().matrix() - identity_channel(2).choi().matrix()).norm() < 1e-14);
    }

    #[test]
    fn rejects_bad_descriptors() {
        assert!(ChannelDescriptor::from_json("{\"kind\":").is_err());
        assert!(ChannelDescriptor::from_json(r#"{"kind":"teleport"}"#).is_err());
        let no_p = ChannelDescriptor::from_json(r#"{"kind":"damping"}"#).unwrap();
        assert!(no_p.to_channel().is_err());
        let bad_p = ChannelDescriptor::from_json(r#"{"kind":"damping","p":1.5}"#).unwrap();
        assert!(matches!(
            bad_p.to_channel(),
            Err(Error::InvalidParameter(_))
        ));
        let dims =
            ChannelDescriptor::from_json(r#"{"kind":"erasure","p":0.5,"dim_out":2}"#).unwrap();
        assert!(matches!(
            dims.to_channel(),
            Err(Error::DimensionMismatch(_))
        ));
        let ragged = ChannelDescriptor::from_json(
            r#"{"kind":"unitary","matrices":[[[[1,0]],[[0,0],[1,0]]]]}"#,
        )
        .unwrap();
        assert!(ragged.to_channel().is_err());
    }
}
