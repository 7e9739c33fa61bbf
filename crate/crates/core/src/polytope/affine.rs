use std::collections::{BTreeSet, HashMap};
use std::fmt::Display;
use std::hash::Hash;
use std::sync::Arc;

use num::Zero;
use serde::{Deserialize, Serialize};

use super::CorPoint;
use crate::error::{Error, Result};
use crate::graph::VariableId;
use crate::rational::{self, Rational};

/// One output coordinate: `offset + Σ coeff · input`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound(
    serialize = "I: Serialize",
    deserialize = "I: serde::de::DeserializeOwned"
))]
pub struct AffineForm<I> {
    #[serde(with = "rational::terms")]
    pub terms: Vec<(I, Rational)>,
    #[serde(with = "rational")]
    pub offset: Rational,
}

impl<I> AffineForm<I> {
    pub fn constant(offset: Rational) -> Self {
        AffineForm {
            terms: Vec::new(),
            offset,
        }
    }

    pub fn single(input: I) -> Self {
        AffineForm {
            terms: vec![(input, rational::int(1))],
            offset: Rational::zero(),
        }
    }
}

/// An affine map onto coordinates of `R^{V ∪ E}` of some graph. Inputs are
/// keyed by `I`: graph variables, or named extension variables.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound(
    serialize = "I: Serialize",
    deserialize = "I: serde::de::DeserializeOwned"
))]
pub struct AffineMap<I> {
    pub outputs: Vec<VariableId>,
    pub forms: Vec<AffineForm<I>>,
}

/// An [`AffineMap`] resolved against a concrete input ordering.
#[derive(Clone, Debug)]
pub struct CompiledMap {
    rows: Vec<(Vec<(usize, Rational)>, Rational)>,
}

impl CompiledMap {
    pub fn apply(&self, x: &[Rational]) -> Vec<Rational> {
        self.rows
            .iter()
            .map(|(terms, offset)| {
                terms
                    .iter()
                    .fold(offset.clone(), |acc, (i, c)| acc + c * &x[*i])
            })
            .collect()
    }
}

impl<I: Clone + Eq + Hash + Display> AffineMap<I> {
    pub fn new(outputs: Vec<VariableId>, forms: Vec<AffineForm<I>>) -> Result<Self> {
        if outputs.len() != forms.len() {
            return Err(Error::MismatchedIndex(format!(
                "{} outputs but {} forms",
                outputs.len(),
                forms.len()
            )));
        }
        let distinct: BTreeSet<&VariableId> = outputs.iter().collect();
        if distinct.len() != outputs.len() {
            return Err(Error::MismatchedIndex("duplicate output coordinate".into()));
        }
        Ok(AffineMap { outputs, forms })
    }

    /// Resolves input keys to positions; every referenced input must exist.
    pub fn compile(&self, inputs: &[I]) -> Result<CompiledMap> {
        let pos: HashMap<&I, usize> = inputs.iter().enumerate().map(|(i, k)| (k, i)).collect();
        let rows = self
            .forms
            .iter()
            .map(|f| {
                let terms = f
                    .terms
                    .iter()
                    .map(|(k, c)| {
                        pos.get(k)
                            .map(|&i| (i, c.clone()))
                            .ok_or_else(|| Error::UnknownVariable(k.to_string()))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok((terms, f.offset.clone()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(CompiledMap { rows })
    }
}

impl AffineMap<VariableId> {
    pub fn identity(vars: &[VariableId]) -> Self {
        AffineMap {
            outputs: vars.to_vec(),
            forms: vars.iter().cloned().map(AffineForm::single).collect(),
        }
    }

    /// Keeps every coordinate except `dropped`.
    pub fn drop_coordinates(vars: &[VariableId], dropped: &[VariableId]) -> Self {
        let kept: Vec<VariableId> = vars
            .iter()
            .filter(|v| !dropped.contains(v))
            .cloned()
            .collect();
        Self::identity(&kept)
    }
}

/// Image of a point set, deduplicated and sorted by coordinates.
pub fn apply_affine(m: &AffineMap<VariableId>, points: &[CorPoint]) -> Result<Vec<CorPoint>> {
    let Some(first) = points.first() else {
        return Ok(Vec::new());
    };
    let vars = first.vars_arc();
    let compiled = m.compile(vars)?;
    let outputs: Arc<[VariableId]> = m.outputs.clone().into();
    let mut image = BTreeSet::new();
    for p in points {
        if p.vars() != &vars[..] {
            return Err(Error::MismatchedIndex(
                "points carry different index sets".into(),
            ));
        }
        image.insert(compiled.apply(p.coords()));
    }
    Ok(image
        .into_iter()
        .map(|c| CorPoint::from_parts(outputs.clone(), c))
        .collect())
}
