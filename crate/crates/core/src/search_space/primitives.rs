use std::collections::HashSet;
use std::fmt;

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PrimitiveKind {
    Classifier,
    Preprocessor,
    Combiner,
}

/// The learner implementation a primitive is bound to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Operator {
    DecisionTree,
    KNeighbors,
    GaussianNb,
    LogisticRegression,
    StandardScaler,
    MinMaxScaler,
    VarianceTopK,
    Binarizer,
    FeatureUnion,
}

impl Operator {
    pub fn kind(self) -> PrimitiveKind {
        use Operator::*;
        match self {
            DecisionTree | KNeighbors | GaussianNb | LogisticRegression => PrimitiveKind::Classifier,
            StandardScaler | MinMaxScaler | VarianceTopK | Binarizer => PrimitiveKind::Preprocessor,
            FeatureUnion => PrimitiveKind::Combiner,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ParamValue {
    Int(i64),
    Real(f64),
}

impl ParamValue {
    pub fn as_f64(self) -> f64 {
        match self {
            ParamValue::Int(v) => v as f64,
            ParamValue::Real(v) => v,
        }
    }

    pub fn as_i64(self) -> i64 {
        match self {
            ParamValue::Int(v) => v,
            ParamValue::Real(v) => v.round() as i64,
        }
    }
}

impl fmt::Display for ParamValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamValue::Int(v) => write!(f, "{v}"),
            ParamValue::Real(v) => write!(f, "{v}"),
        }
    }
}

/// A named hyperparameter with a finite, ordered grid of allowed values.
#[derive(Clone, Debug, PartialEq)]
pub struct ParamSpec {
    pub name: String,
    pub values: Vec<ParamValue>,
}

impl ParamSpec {
    pub fn new(name: &str, values: Vec<ParamValue>) -> Self {
        ParamSpec { name: name.to_string(), values }
    }

    pub fn ints(name: &str, values: impl IntoIterator<Item = i64>) -> Self {
        Self::new(name, values.into_iter().map(ParamValue::Int).collect())
    }

    pub fn reals(name: &str, values: impl IntoIterator<Item = f64>) -> Self {
        Self::new(name, values.into_iter().map(ParamValue::Real).collect())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PrimitiveSpec {
    pub name: String,
    pub operator: Operator,
    pub params: Vec<ParamSpec>,
}

impl PrimitiveSpec {
    pub fn new(name: &str, operator: Operator, params: Vec<ParamSpec>) -> Self {
        PrimitiveSpec { name: name.to_string(), operator, params }
    }

    pub fn kind(&self) -> PrimitiveKind {
        self.operator.kind()
    }

    /// Every hyperparameter assignment, as grid indices in field order.
    pub fn assignments(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::with_capacity(self.params.len())];
        for p in &self.params {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (0..p.values.len()).map(move |i| {
                        let mut a = prefix.clone();
                        a.push(i);
                        a
                    })
                })
                .collect();
        }
        out
    }

    pub fn param_index(&self, name: &str) -> Option<usize> {
        self.params.iter().position(|p| p.name == name)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimitiveId(pub usize);

/// The set of primitives a pipeline may be built from.
#[derive(Clone, Debug, PartialEq)]
pub struct Registry {
    primitives: Vec<PrimitiveSpec>,
}

fn valid_ident(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Registry {
    pub fn new(primitives: Vec<PrimitiveSpec>) -> Result<Self> {
        let mut names = HashSet::new();
        for p in &primitives {
            if !valid_ident(&p.name) {
                return Err(Error::Config(format!("invalid primitive name {:?}", p.name)));
            }
            if !names.insert(p.name.as_str()) {
                return Err(Error::Config(format!("duplicate primitive name {:?}", p.name)));
            }
            let mut pnames = HashSet::new();
            for param in &p.params {
                if !valid_ident(&param.name) || !pnames.insert(param.name.as_str()) {
                    return Err(Error::Config(format!(
                        "invalid or duplicate hyperparameter {:?} on {}",
                        param.name, p.name
                    )));
                }
                if param.values.is_empty() {
                    return Err(Error::Config(format!(
                        "empty grid for {}.{}",
                        p.name, param.name
                    )));
                }
                let mut shown = HashSet::new();
                for v in &param.values {
                    if !shown.insert(v.to_string()) {
                        return Err(Error::Config(format!(
                            "duplicate value {v} in grid {}.{}",
                            p.name, param.name
                        )));
                    }
                }
            }
        }
        Ok(Registry { primitives })
    }

    /// The built-in primitive set: four classifiers, four preprocessors and
    /// a two-branch feature union.
    pub fn default_set() -> Self {
        use Operator::*;
        Registry::new(vec![
            PrimitiveSpec::new("DecisionTree", DecisionTree, vec![ParamSpec::ints("max_depth", 1..=10)]),
            PrimitiveSpec::new(
                "KNeighbors",
                KNeighbors,
                vec![ParamSpec::ints("n_neighbors", [1, 3, 5, 7, 9]), ParamSpec::ints("p", [1, 2])],
            ),
            PrimitiveSpec::new(
                "GaussianNB",
                GaussianNb,
                vec![ParamSpec::reals("var_smoothing", [1e-9, 1e-7, 1e-5, 1e-3, 1e-1])],
            ),
            PrimitiveSpec::new(
                "LogisticRegression",
                LogisticRegression,
                vec![ParamSpec::reals("l2", [0.001, 0.01, 0.1, 1.0, 10.0])],
            ),
            PrimitiveSpec::new("StandardScaler", StandardScaler, vec![]),
            PrimitiveSpec::new("MinMaxScaler", MinMaxScaler, vec![]),
            PrimitiveSpec::new("VarianceTopK", VarianceTopK, vec![ParamSpec::ints("k", [1, 2, 3, 5, 8, 13])]),
            PrimitiveSpec::new("Binarizer", Binarizer, vec![]),
            PrimitiveSpec::new("FeatureUnion", FeatureUnion, vec![]),
        ])
        .expect("built-in registry is valid")
    }

    pub fn len(&self) -> usize {
        self.primitives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primitives.is_empty()
    }

    pub fn get(&self, id: PrimitiveId) -> &PrimitiveSpec {
        &self.primitives[id.0]
    }

    pub fn by_name(&self, name: &str) -> Option<PrimitiveId> {
        self.primitives.iter().position(|p| p.name == name).map(PrimitiveId)
    }

    pub fn ids_of_kind(&self, kind: PrimitiveKind) -> Vec<PrimitiveId> {
        (0..self.primitives.len())
            .filter(|&i| self.primitives[i].kind() == kind)
            .map(PrimitiveId)
            .collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (PrimitiveId, &PrimitiveSpec)> {
        self.primitives.iter().enumerate().map(|(i, p)| (PrimitiveId(i), p))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_registry_shape() {
        let r = Registry::default_set();
        assert_eq!(r.ids_of_kind(PrimitiveKind::Classifier).len(), 4);
        assert_eq!(r.ids_of_kind(PrimitiveKind::Preprocessor).len(), 4);
        assert_eq!(r.ids_of_kind(PrimitiveKind::Combiner).len(), 1);
    }

    #[test]
    fn rejects_duplicate_names_and_empty_grids() {
        let p = PrimitiveSpec::new("A", Operator::GaussianNb, vec![]);
        assert!(Registry::new(vec![p.clone(), p]).is_err());
        let q = PrimitiveSpec::new("B", Operator::KNeighbors, vec![ParamSpec::ints("k", [])]);
        assert!(Registry::new(vec![q]).is_err());
    }

    #[test]
    fn assignments_enumerate_cartesian_product() {
        let r = Registry::default_set();
        let knn = r.get(r.by_name("KNeighbors").unwrap());
        let all = knn.assignments();
        assert_eq!(all.len(), 10);
        assert_eq!(all[0], vec![0, 0]);
        assert_eq!(all[9], vec![4, 1]);
        let scaler = r.get(r.by_name("StandardScaler").unwrap());
        assert_eq!(scaler.assignments(), vec![Vec::<usize>::new()]);
    }
}
