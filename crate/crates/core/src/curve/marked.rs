use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{tangency_points, CubicCurve, CurveError};
use crate::algebra::{Field, PlanePoint};

/// A point in the first neighbourhood of `base`, given by a line through `base`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InfinitelyNearRecord {
    pub base: PlanePoint,
    /// The line through `base` in the direction of the record, as a dual point.
    pub line: PlanePoint,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum OmegaKind {
    Proper(PlanePoint),
    Near(InfinitelyNearRecord),
    /// Abstract mode: a label with no coordinates.
    Formal { label: String, near: bool },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OmegaPoint {
    pub id: usize,
    pub kind: OmegaKind,
}

impl OmegaPoint {
    pub fn proper(&self) -> Option<&PlanePoint> {
        match &self.kind {
            OmegaKind::Proper(p) => Some(p),
            _ => None,
        }
    }

    pub fn is_near(&self) -> bool {
        matches!(self.kind, OmegaKind::Near(_) | OmegaKind::Formal { near: true, .. })
    }
}

/// The marked set `Ω₀ ⊆ Ω` with its `≻` relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkedPointSet {
    curve: Option<CubicCurve>,
    field: Option<Field>,
    generators: Vec<usize>,
    omega: Vec<OmegaPoint>,
    succ: Vec<Vec<usize>>,
    rel: Vec<Vec<bool>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NearJson {
    pub base: [String; 3],
    pub line: [String; 3],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OmegaJson {
    Proper { id: usize, point: [String; 3] },
    Near { id: usize, near: NearJson },
    Formal { id: usize, label: String, near: bool },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarkedSetJson {
    pub field: Option<String>,
    pub curve: Option<[String; 10]>,
    pub generators: Vec<usize>,
    pub omega: Vec<OmegaJson>,
    /// Pairs `[b, a]` with `b ≻ a`.
    pub succ: Vec<[usize; 2]>,
}

impl MarkedPointSet {
    /// Builds a set from explicit data and checks every invariant.
    pub fn from_parts(
        curve: Option<CubicCurve>,
        kinds: Vec<OmegaKind>,
        generators: Vec<usize>,
        pairs: &[(usize, usize)],
    ) -> Result<Self, CurveError> {
        let n = kinds.len();
        let omega: Vec<OmegaPoint> = kinds
            .into_iter()
            .enumerate()
            .map(|(id, kind)| OmegaPoint { id, kind })
            .collect();
        let mut rel = vec![vec![false; n]; n];
        for &(b, a) in pairs {
            if b >= n || a >= n {
                return Err(CurveError::InvalidMarkedSet(format!("relation {b} ≻ {a} out of range")));
            }
            rel[b][a] = true;
        }
        let succ = rel
            .iter()
            .map(|row| (0..n).filter(|&a| row[a]).collect())
            .collect();
        let field = curve.as_ref().map(|c| c.field());
        let ms = MarkedPointSet {
            curve,
            field,
            generators,
            omega,
            succ,
            rel,
        };
        ms.validate()?;
        Ok(ms)
    }

    /// Abstract mode: `near.len()` generators, each with four fresh successors and no
    /// other relations; `near[i]` makes the last successor of generator `i` a formal
    /// infinitely near point.
    pub fn generic(near: &[bool]) -> Self {
        let mut kinds = Vec::new();
        let mut generators = Vec::new();
        let mut pairs = Vec::new();
        for (i, &nr) in near.iter().enumerate() {
            let g = kinds.len();
            generators.push(g);
            kinds.push(OmegaKind::Formal {
                label: format!("g{i}"),
                near: false,
            });
            for k in 0..4 {
                let is_near = nr && k == 3;
                let label = if is_near { format!("g{i}.near") } else { format!("g{i}.{k}") };
                pairs.push((g, kinds.len()));
                kinds.push(OmegaKind::Formal { label, near: is_near });
            }
        }
        Self::from_parts(None, kinds, generators, &pairs).expect("generic configuration is valid")
    }

    pub fn curve(&self) -> Option<&CubicCurve> {
        self.curve.as_ref()
    }

    pub fn field(&self) -> Option<Field> {
        self.field
    }

    pub fn is_abstract(&self) -> bool {
        self.curve.is_none()
    }

    pub fn len(&self) -> usize {
        self.omega.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omega.is_empty()
    }

    pub fn omega(&self) -> &[OmegaPoint] {
        &self.omega
    }

    /// Generator ids, in the order they were supplied.
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn is_generator(&self, id: usize) -> bool {
        self.generators.contains(&id)
    }

    /// Ids `a` with `b ≻ a`, increasing.
    pub fn successors(&self, b: usize) -> &[usize] {
        &self.succ[b]
    }

    pub fn succ(&self, b: usize, a: usize) -> bool {
        self.rel[b][a]
    }

    pub fn pairs(&self) -> Vec<[usize; 2]> {
        (0..self.len())
            .flat_map(|b| self.succ[b].iter().map(move |&a| [b, a]))
            .collect()
    }

    pub fn id_of(&self, p: &PlanePoint) -> Option<usize> {
        self.omega.iter().position(|o| o.proper() == Some(p))
    }

    /// Base points of `σ_g` inside `Ω`: `g` and its successors.
    pub fn base_set(&self, g: usize) -> Vec<usize> {
        let mut v = vec![g];
        v.extend(&self.succ[g]);
        v
    }

    /// Whether the base-point sets of `σ_g` and `σ_h` are disjoint.
    pub fn relation_free(&self, g: usize, h: usize) -> bool {
        let bg = self.base_set(g);
        self.base_set(h).iter().all(|x| !bg.contains(x))
    }

    pub fn validate(&self) -> Result<(), CurveError> {
        let n = self.len();
        let bad = |m: String| Err(CurveError::InvalidMarkedSet(m));
        for (i, g) in self.generators.iter().enumerate() {
            if *g >= n {
                return bad(format!("generator id {g} out of range"));
            }
            if self.generators[..i].contains(g) {
                return bad(format!("generator id {g} repeated"));
            }
            if self.omega[*g].is_near() {
                return bad(format!("generator {g} is infinitely near"));
            }
            if self.succ[*g].len() != 4 {
                return bad(format!("generator {g} has {} successors, expected 4", self.succ[*g].len()));
            }
        }
        for b in 0..n {
            if self.rel[b][b] {
                return bad(format!("{b} ≻ {b}"));
            }
            if self.omega[b].is_near() && !self.succ[b].is_empty() {
                return bad(format!("infinitely near point {b} has successors"));
            }
            let s = &self.succ[b];
            for (i, &a1) in s.iter().enumerate() {
                for &a2 in &s[i + 1..] {
                    if self.rel[a1][b] || self.rel[a2][b] || self.rel[a1][a2] || self.rel[a2][a1] {
                        return bad(format!("{b} ≻ {a1}, {b} ≻ {a2} but a further relation holds among them"));
                    }
                }
            }
        }
        for o in &self.omega {
            if let OmegaKind::Near(r) = &o.kind {
                let preds: Vec<usize> = (0..n).filter(|&b| self.rel[b][o.id]).collect();
                let ok = preds.len() == 1 && self.omega[preds[0]].proper() == Some(&r.base);
                if !ok {
                    return bad(format!("infinitely near point {} must be a successor of its base only", o.id));
                }
            }
        }
        if let Some(c) = &self.curve {
            for o in &self.omega {
                let on = match &o.kind {
                    OmegaKind::Proper(p) => c.contains(p),
                    OmegaKind::Near(r) => c.contains(&r.base) && c.tangent_dual(&r.base).ok() == Some(r.line.clone()),
                    OmegaKind::Formal { .. } => false,
                };
                if !on {
                    return bad(format!("omega point {} does not lie on the curve", o.id));
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> MarkedSetJson {
        let omega = self
            .omega
            .iter()
            .map(|o| match &o.kind {
                OmegaKind::Proper(p) => OmegaJson::Proper {
                    id: o.id,
                    point: p.literals(),
                },
                OmegaKind::Near(r) => OmegaJson::Near {
                    id: o.id,
                    near: NearJson {
                        base: r.base.literals(),
                        line: r.line.literals(),
                    },
                },
                OmegaKind::Formal { label, near } => OmegaJson::Formal {
                    id: o.id,
                    label: label.clone(),
                    near: *near,
                },
            })
            .collect();
        MarkedSetJson {
            field: self.field.map(|f| f.spec()),
            curve: self.curve.as_ref().map(|c| c.coefficients()),
            generators: self.generators.clone(),
            omega,
            succ: self.pairs(),
        }
    }

    /// Hex sha256 of the canonical JSON export.
    pub fn config_hash(&self) -> String {
        let bytes = serde_json::to_vec(&self.to_json()).expect("serializable");
        hex::encode(Sha256::digest(&bytes))
    }

    /// A human-readable label for an omega id.
    pub fn label(&self, id: usize) -> String {
        match &self.omega[id].kind {
            OmegaKind::Proper(p) => p.to_string(),
            OmegaKind::Near(r) => format!("near({} along {})", r.base, r.line),
            OmegaKind::Formal { label, .. } => label.clone(),
        }
    }
}

/// Assembles `Ω` from the tangency points of each generator, with the `≻` table
/// over all ordered pairs.
pub fn marked_set_build(c: &CubicCurve, generators: &[PlanePoint]) -> Result<MarkedPointSet, CurveError> {
    for (i, g) in generators.iter().enumerate() {
        if g.field() != c.field() || !c.contains(g) {
            return Err(CurveError::GeneratorOffCurve(g.clone()));
        }
        if generators[..i].contains(g) {
            return Err(CurveError::DuplicateGenerator(g.clone()));
        }
    }
    // Sort key: (base point, 0 for proper / 1 for near).
    let mut entries: BTreeMap<(PlanePoint, u8), OmegaKind> = BTreeMap::new();
    for g in generators {
        entries.insert((g.clone(), 0), OmegaKind::Proper(g.clone()));
        let tp = tangency_points(c, g)?;
        for a in tp.proper {
            entries.insert((a.clone(), 0), OmegaKind::Proper(a));
        }
        if let Some(line) = tp.inflexion_direction {
            entries.insert(
                (g.clone(), 1),
                OmegaKind::Near(InfinitelyNearRecord { base: g.clone(), line }),
            );
        }
    }
    let kinds: Vec<OmegaKind> = entries.into_values().collect();
    let mut pairs = Vec::new();
    for (b, kb) in kinds.iter().enumerate() {
        let OmegaKind::Proper(pb) = kb else { continue };
        for (a, ka) in kinds.iter().enumerate() {
            let related = match ka {
                OmegaKind::Proper(pa) => super::succ(c, pb, pa)?,
                OmegaKind::Near(r) => &r.base == pb,
                OmegaKind::Formal { .. } => false,
            };
            if related {
                pairs.push((b, a));
            }
        }
    }
    let gen_ids = generators
        .iter()
        .map(|g| kinds.iter().position(|k| k == &OmegaKind::Proper(g.clone())).unwrap())
        .collect();
    MarkedPointSet::from_parts(Some(c.clone()), kinds, gen_ids, &pairs)
}
