use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::{IntervalQ, Rational};
use crate::curve::{Curve, Mode, PointQ};
use crate::det::DECurve;

/// What covers the points of one piece.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PieceCover {
    Curve(DECurve),
    Singleton(PointQ),
    Empty,
}

impl PieceCover {
    pub fn kind(&self) -> &'static str {
        match self {
            PieceCover::Curve(_) => "curve",
            PieceCover::Singleton(_) => "singleton",
            PieceCover::Empty => "empty",
        }
    }
}

#[derive(Serialize, Deserialize)]
struct CoverRepr {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    coeffs: Option<Vec<Vec<Rational>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    point: Option<PointQ>,
}

impl Serialize for PieceCover {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let repr = match self {
            PieceCover::Curve(c) => CoverRepr { kind: self.kind().into(), coeffs: Some(c.coeffs().to_vec()), point: None },
            PieceCover::Singleton(p) => CoverRepr { kind: self.kind().into(), coeffs: None, point: Some(p.clone()) },
            PieceCover::Empty => CoverRepr { kind: self.kind().into(), coeffs: None, point: None },
        };
        repr.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PieceCover {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = CoverRepr::deserialize(d)?;
        match (repr.kind.as_str(), repr.coeffs, repr.point) {
            ("curve", Some(grid), None) => {
                let d = grid.len() as u32;
                let e = grid.first().map_or(0, Vec::len) as u32;
                DECurve::from_raw(d, e, grid).map(PieceCover::Curve).map_err(D::Error::custom)
            }
            ("singleton", None, Some(p)) => Ok(PieceCover::Singleton(p)),
            ("empty", None, None) => Ok(PieceCover::Empty),
            (kind, _, _) => Err(D::Error::custom(format!("malformed cover of kind '{kind}'"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Piece {
    pub interval: IntervalQ,
    pub cover: PieceCover,
    pub points: Vec<PointQ>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverMeta {
    pub initial_pieces: usize,
    pub bisections: usize,
    pub max_depth: u32,
}

/// A partition of the curve domain with one covering object per piece.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverCertificate {
    pub curve: Curve,
    pub n: u64,
    pub d: u32,
    pub e: u32,
    pub mode: Mode,
    pub pieces: Vec<Piece>,
    pub meta: CoverMeta,
}

impl CoverCertificate {
    pub fn piece_count(&self) -> usize {
        self.pieces.len()
    }

    pub fn point_count(&self) -> usize {
        self.pieces.iter().map(|p| p.points.len()).sum()
    }

    pub fn curve_count(&self) -> usize {
        self.pieces.iter().filter(|p| matches!(p.cover, PieceCover::Curve(_))).count()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}
