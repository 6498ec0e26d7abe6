//! Reference choosers from prospect theory and image theory.
//!
//! The comparison harness uses two simplified models: a prospect-theory proxy
//! that minimizes one designated risk attribute over all alternatives, and an
//! image-theory chooser that screens by threshold violations and then
//! optimizes one designated quantitative attribute. The standard two-outcome
//! value and weighting functions are included for completeness.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::ladder::{lsp, DominanceMode};
use crate::model::{AttributeId, AttributeKind, DecisionTask, Polarity, Verdict};
use crate::sift::psp;
use crate::value_order::{compare_values, satisfies_threshold, PartialOrdering};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BaselineError {
    #[error("prospect-theory parameter {name} must be positive and finite, got {value}")]
    InvalidParam { name: &'static str, value: f64 },
    #[error("lottery probabilities must lie in [0, 1] and sum to 1 (sum {sum})")]
    InvalidLottery { sum: f64 },
    #[error("lottery has {0} nonzero outcomes; only two-outcome prospects are supported")]
    UnsupportedLottery(usize),
    #[error("no {0} attribute designated")]
    MissingDesignation(&'static str),
    #[error("attribute {attribute} cannot serve as the {role} attribute: {reason}")]
    InvalidDesignation {
        attribute: AttributeId,
        role: &'static str,
        reason: String,
    },
}

/// Prospect-theory parameters. Defaults are the published median estimates
/// (alpha = beta = 0.88, lambda = 2.25, gamma = 0.61, delta = 0.69).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PtParams {
    pub alpha: f64,
    pub beta: f64,
    pub lambda: f64,
    pub gamma: f64,
    pub delta: f64,
}

impl Default for PtParams {
    fn default() -> Self {
        PtParams {
            alpha: 0.88,
            beta: 0.88,
            lambda: 2.25,
            gamma: 0.61,
            delta: 0.69,
        }
    }
}

impl PtParams {
    pub fn new(alpha: f64, beta: f64, lambda: f64, gamma: f64, delta: f64) -> Result<Self, BaselineError> {
        let p = PtParams {
            alpha,
            beta,
            lambda,
            gamma,
            delta,
        };
        for (name, value) in [
            ("alpha", alpha),
            ("beta", beta),
            ("lambda", lambda),
            ("gamma", gamma),
            ("delta", delta),
        ] {
            if !(value.is_finite() && value > 0.0) {
                return Err(BaselineError::InvalidParam { name, value });
            }
        }
        Ok(p)
    }

    /// Non-fatal oddities, e.g. loss seeking (lambda < 1).
    pub fn warnings(&self) -> Vec<String> {
        let mut w = Vec::new();
        if self.lambda < 1.0 {
            w.push(format!(
                "lambda = {} < 1 models loss seeking rather than loss aversion",
                self.lambda
            ));
        }
        w
    }
}

/// Value function: `x^alpha` for gains, `-lambda * (-x)^beta` for losses.
pub fn pt_value(x: f64, p: &PtParams) -> f64 {
    if x >= 0.0 {
        x.powf(p.alpha)
    } else {
        -p.lambda * (-x).powf(p.beta)
    }
}

/// Inverse-S weighting `p^g / (p^g + (1-p)^g)^(1/g)`.
pub fn pt_weight(prob: f64, gamma: f64) -> f64 {
    if gamma == 1.0 {
        return prob;
    }
    let num = prob.powf(gamma);
    num / (num + (1.0 - prob).powf(gamma)).powf(1.0 / gamma)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Lottery {
    outcomes: Vec<(f64, f64)>,
}

impl Lottery {
    pub fn new(outcomes: Vec<(f64, f64)>) -> Result<Self, BaselineError> {
        let sum: f64 = outcomes.iter().map(|(_, p)| p).sum();
        let probs_ok = outcomes.iter().all(|(x, p)| x.is_finite() && (0.0..=1.0).contains(p));
        if !probs_ok || (sum - 1.0).abs() > 1e-9 {
            return Err(BaselineError::InvalidLottery { sum });
        }
        Ok(Lottery { outcomes })
    }

    pub fn certain(x: f64) -> Self {
        Lottery {
            outcomes: vec![(x, 1.0)],
        }
    }

    pub fn outcomes(&self) -> &[(f64, f64)] {
        &self.outcomes
    }
}

/// Separable evaluation of a prospect with at most two nonzero outcomes:
/// gains weighted with gamma, losses with delta.
pub fn cpt_evaluate(lottery: &Lottery, p: &PtParams) -> Result<f64, BaselineError> {
    let nonzero = lottery.outcomes.iter().filter(|(x, _)| *x != 0.0).count();
    if nonzero > 2 {
        return Err(BaselineError::UnsupportedLottery(nonzero));
    }
    Ok(lottery
        .outcomes
        .iter()
        .filter(|(x, _)| *x != 0.0)
        .map(|&(x, prob)| {
            let w = if x > 0.0 {
                pt_weight(prob, p.gamma)
            } else {
                pt_weight(prob, p.delta)
            };
            w * pt_value(x, p)
        })
        .sum())
}

/// Result of a baseline chooser.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "result", content = "chosen", rename_all = "snake_case")]
pub enum BaselineChoice {
    Chosen(String),
    Undecidable,
}

/// The alternative strictly better than every other one on `attr`, if any.
fn unique_best(task: &DecisionTask, ids: &[String], attr: AttributeId) -> BaselineChoice {
    let polarity = task.polarity(attr);
    let value = |id: &String| task.alternative(id).and_then(|a| a.value(attr));
    for id in ids {
        let Some(v) = value(id) else { continue };
        let best = ids
            .iter()
            .filter(|o| *o != id)
            .all(|o| value(o).is_some_and(|w| compare_values(v, w, polarity) == Ok(PartialOrdering::Better)));
        if best {
            return BaselineChoice::Chosen(id.clone());
        }
    }
    BaselineChoice::Undecidable
}

/// Prospect-theory proxy under a gain frame: the decision maker is risk
/// averse, so the alternative with the uniquely lowest risk wins. There is no
/// screening stage; every alternative competes.
pub fn pt_proxy_choose(
    task: &DecisionTask,
    risk_attribute: Option<AttributeId>,
) -> Result<BaselineChoice, BaselineError> {
    let attr = risk_attribute.ok_or(BaselineError::MissingDesignation("risk"))?;
    let invalid = |reason: String| BaselineError::InvalidDesignation {
        attribute: attr,
        role: "risk",
        reason,
    };
    let a = task.attribute(attr).ok_or_else(|| invalid("not declared".into()))?;
    if a.kind == AttributeKind::Categorical || a.polarity != Polarity::Cost {
        return Err(invalid(format!(
            "expected a numeric or ordinal cost attribute, found {} {}",
            a.polarity, a.kind
        )));
    }
    Ok(unique_best(task, &task.alternative_ids(), attr))
}

/// Image-theory compatibility test: alternatives with at most `rejection_budget`
/// basic-threshold violations, in task order.
pub fn it_compatible(task: &DecisionTask, rejection_budget: usize) -> Vec<String> {
    task.alternatives
        .iter()
        .filter(|alt| {
            let violations = task
                .thresholds
                .iter()
                .filter(|t| {
                    !alt.value(t.attribute)
                        .is_some_and(|v| satisfies_threshold(v, t).unwrap_or(false))
                })
                .count();
            violations <= rejection_budget
        })
        .map(|alt| alt.id.clone())
        .collect()
}

/// Image-theory chooser: compatibility screening, then profitability on a
/// single designated numeric attribute. Without a designation, or without a
/// unique best survivor, the result is `Undecidable`.
pub fn it_choose(
    task: &DecisionTask,
    profit_attribute: Option<AttributeId>,
    rejection_budget: usize,
) -> Result<BaselineChoice, BaselineError> {
    let survivors = it_compatible(task, rejection_budget);
    let Some(attr) = profit_attribute else {
        return Ok(BaselineChoice::Undecidable);
    };
    let a = task.attribute(attr).ok_or_else(|| BaselineError::InvalidDesignation {
        attribute: attr,
        role: "profit",
        reason: "not declared".into(),
    })?;
    if a.kind != AttributeKind::Numeric {
        return Err(BaselineError::InvalidDesignation {
            attribute: attr,
            role: "profit",
            reason: format!("expected a numeric attribute, found {}", a.kind),
        });
    }
    if survivors.is_empty() {
        return Ok(BaselineChoice::Undecidable);
    }
    Ok(unique_best(task, &survivors, attr))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Theory {
    Lt,
    Pt,
    It,
}

impl Theory {
    pub const ALL: [Theory; 3] = [Theory::Lt, Theory::Pt, Theory::It];

    pub fn as_str(self) -> &'static str {
        match self {
            Theory::Lt => "lt",
            Theory::Pt => "pt",
            Theory::It => "it",
        }
    }
}

impl std::str::FromStr for Theory {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "lt" => Ok(Theory::Lt),
            "pt" => Ok(Theory::Pt),
            "it" => Ok(Theory::It),
            other => Err(format!("unknown theory {other:?} (expected lt, pt or it)")),
        }
    }
}

impl fmt::Display for Theory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Prediction of one theory on one task.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "result", content = "detail", rename_all = "snake_case")]
pub enum Prediction {
    Chosen(String),
    Undecidable,
    /// The theory has nothing to say about the task (no designation applies).
    Inapplicable,
    /// Ladder verdict other than a choice.
    NoChoice(Verdict),
}

impl Prediction {
    pub fn chosen(&self) -> Option<&str> {
        match self {
            Prediction::Chosen(id) => Some(id),
            _ => None,
        }
    }
}

impl fmt::Display for Prediction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Prediction::Chosen(id) => write!(f, "chosen {id}"),
            Prediction::Undecidable => f.write_str("undecidable"),
            Prediction::Inapplicable => f.write_str("inapplicable"),
            Prediction::NoChoice(v) => write!(f, "{}", v.name()),
        }
    }
}

impl From<BaselineChoice> for Prediction {
    fn from(c: BaselineChoice) -> Self {
        match c {
            BaselineChoice::Chosen(id) => Prediction::Chosen(id),
            BaselineChoice::Undecidable => Prediction::Undecidable,
        }
    }
}

/// Per-invocation designations for the baselines.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CompareConfig {
    pub mode: DominanceMode,
    pub pt_risk_attribute: Option<AttributeId>,
    pub it_profit_attribute: Option<AttributeId>,
    pub it_budget: usize,
}

/// Runs one theory on a task. A prospect-theory run without a risk
/// designation is `Inapplicable`.
pub fn predict(task: &DecisionTask, theory: Theory, cfg: &CompareConfig) -> Result<Prediction, BaselineError> {
    match theory {
        Theory::Lt => {
            let sift = psp(task);
            Ok(match lsp(task, &sift.feasible, cfg.mode).verdict {
                Verdict::Chosen(id) => Prediction::Chosen(id),
                other => Prediction::NoChoice(other),
            })
        }
        Theory::Pt => match cfg.pt_risk_attribute {
            None => Ok(Prediction::Inapplicable),
            some => pt_proxy_choose(task, some).map(Prediction::from),
        },
        Theory::It => it_choose(task, cfg.it_profit_attribute, cfg.it_budget).map(Prediction::from),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::*;

    #[test]
    fn value_function_points() {
        let p = PtParams::default();
        assert_eq!(pt_value(0.0, &p), 0.0);
        let gain = (0.88 * 100f64.ln()).exp();
        assert!((pt_value(100.0, &p) - gain).abs() < 1e-9);
        assert!((pt_value(100.0, &p) - 57.544).abs() < 1e-3);
        assert!((pt_value(-100.0, &p) + 2.25 * gain).abs() < 1e-9);
        assert!((pt_value(-100.0, &p) + 129.47).abs() < 1e-2);
    }

    #[test]
    fn weighting_points() {
        assert_eq!(pt_weight(0.0, 0.61), 0.0);
        assert_eq!(pt_weight(1.0, 0.61), 1.0);
        // 0.5^0.61 / (2 * 0.5^0.61)^(1/0.61), evaluated through logs
        let g: f64 = 0.61;
        let ln_num = g * 0.5f64.ln();
        let expected = (ln_num - (std::f64::consts::LN_2 + ln_num) / g).exp();
        assert!((pt_weight(0.5, g) - expected).abs() < 1e-12);
        assert!((pt_weight(0.5, g) - 0.421).abs() < 1e-3);
        for i in 0..=1000 {
            let p = i as f64 / 1000.0;
            assert_eq!(pt_weight(p, 1.0), p);
        }
    }

    #[test]
    fn lottery_evaluation() {
        let p = PtParams::default();
        assert_eq!(cpt_evaluate(&Lottery::certain(0.0), &p).unwrap(), 0.0);
        assert!((cpt_evaluate(&Lottery::certain(-40.0), &p).unwrap() - pt_value(-40.0, &p)).abs() < 1e-12);
        let l = Lottery::new(vec![(100.0, 0.5), (0.0, 0.5)]).unwrap();
        let v = cpt_evaluate(&l, &p).unwrap();
        assert!((v - pt_weight(0.5, 0.61) * pt_value(100.0, &p)).abs() < 1e-12);
        assert!((v - 24.2).abs() < 0.05);
        let mixed = Lottery::new(vec![(50.0, 0.5), (-50.0, 0.5)]).unwrap();
        let v = cpt_evaluate(&mixed, &p).unwrap();
        let expected = pt_weight(0.5, 0.61) * pt_value(50.0, &p) + pt_weight(0.5, 0.69) * pt_value(-50.0, &p);
        assert!((v - expected).abs() < 1e-12);
    }

    #[test]
    fn lottery_errors() {
        assert!(matches!(
            Lottery::new(vec![(1.0, 0.6), (2.0, 0.6)]),
            Err(BaselineError::InvalidLottery { .. })
        ));
        assert!(Lottery::new(vec![(1.0, -0.1), (2.0, 1.1)]).is_err());
        let three = Lottery::new(vec![(1.0, 0.2), (2.0, 0.3), (3.0, 0.5)]).unwrap();
        assert_eq!(
            cpt_evaluate(&three, &PtParams::default()),
            Err(BaselineError::UnsupportedLottery(3))
        );
    }

    #[test]
    fn params_validated() {
        assert!(PtParams::new(0.88, 0.88, 2.25, 0.61, 0.69).is_ok());
        assert!(matches!(
            PtParams::new(0.0, 0.88, 2.25, 0.61, 0.69),
            Err(BaselineError::InvalidParam { name: "alpha", .. })
        ));
        assert!(PtParams::new(0.88, 0.88, f64::NAN, 0.61, 0.69).is_err());
        assert!(PtParams::default().warnings().is_empty());
        assert_eq!(PtParams::new(0.88, 0.88, 0.5, 0.61, 0.69).unwrap().warnings().len(), 1);
    }

    fn risk_task(risks: &[u8]) -> DecisionTask {
        DecisionTask {
            task_id: "risk".into(),
            attributes: vec![
                Attribute::new(1, "risk", AttributeKind::Ordinal, Polarity::Cost),
                Attribute::new(2, "gain", AttributeKind::Numeric, Polarity::Benefit),
            ],
            basic_ids: [1].into(),
            thresholds: vec![Threshold::new(1, Predicate::MaxLevel(3))],
            partition: DominancePartition::from_ids(&[&[2]]),
            aspiration: None,
            alternatives: risks
                .iter()
                .enumerate()
                .map(|(i, r)| {
                    Alternative::new(
                        format!("a{i}"),
                        [(1, AttributeValue::Ordinal(*r)), (2, AttributeValue::Crisp(i as f64))],
                    )
                })
                .collect(),
        }
    }

    #[test]
    fn pt_proxy() {
        assert_eq!(
            pt_proxy_choose(&risk_task(&[2, 1, 3]), Some(1)).unwrap(),
            BaselineChoice::Chosen("a1".into())
        );
        assert_eq!(
            pt_proxy_choose(&risk_task(&[2, 2, 2]), Some(1)).unwrap(),
            BaselineChoice::Undecidable
        );
        assert_eq!(
            pt_proxy_choose(&risk_task(&[2]), None),
            Err(BaselineError::MissingDesignation("risk"))
        );
        assert!(matches!(
            pt_proxy_choose(&risk_task(&[2]), Some(2)),
            Err(BaselineError::InvalidDesignation { .. })
        ));
        assert!(matches!(
            pt_proxy_choose(&risk_task(&[2]), Some(9)),
            Err(BaselineError::InvalidDesignation { .. })
        ));
    }

    #[test]
    fn it_chooser() {
        let t = risk_task(&[4, 1, 2]);
        assert_eq!(it_compatible(&t, 0), vec!["a1", "a2"]);
        assert_eq!(it_compatible(&t, 1), vec!["a0", "a1", "a2"]);
        assert_eq!(it_choose(&t, Some(2), 0).unwrap(), BaselineChoice::Chosen("a2".into()));
        assert_eq!(it_choose(&t, Some(2), 1).unwrap(), BaselineChoice::Chosen("a2".into()));
        assert_eq!(it_choose(&t, None, 0).unwrap(), BaselineChoice::Undecidable);
        assert!(it_choose(&t, Some(1), 0).is_err());
        assert_eq!(
            it_choose(&risk_task(&[5, 5]), Some(2), 0).unwrap(),
            BaselineChoice::Undecidable
        );
    }

    #[test]
    fn theory_names() {
        for t in Theory::ALL {
            assert_eq!(t.as_str().parse::<Theory>().unwrap(), t);
        }
        assert!("eba".parse::<Theory>().is_err());
    }
}
