use super::answer::qf_answer;
use super::emit::{emit_qepcad, qepcad_input};
use super::{Atom, Conjunction, FoFormula, Matrix, QKind, QeError, Rel};
use crate::exact::ExactSolution;
use crate::fixpoint::{FixpointSystem, Quantifier};
use crate::poly::Poly;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stage {
    pub target: usize,
    pub quantifier: Quantifier,
    /// Targets of earlier stages mentioned by the equation, directly or through
    /// the parameters of another prior; their characterizations are asserted.
    pub priors: Vec<usize>,
    /// Variables of later stages that occur in the equation; left free.
    pub params: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StagePlan {
    pub stages: Vec<Stage>,
}

impl StagePlan {
    pub fn stage_of(&self, var: usize) -> Option<usize> {
        self.stages.iter().position(|s| s.target == var)
    }
}

/// Where `x <= 1` (μ) or `x >= 0` (ν) is asserted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum BoundPolicy {
    /// As in the hand-written listings: μ-stages with earlier characterizations only.
    #[default]
    Listings,
    /// Every stage.
    Uniform,
}

/// Order of the primed copies of the equation and the bound in the premise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum PrimedOrder {
    /// Mirrors the unprimed conjuncts: equation, then bound.
    #[default]
    EquationFirst,
    BoundFirst,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct QeOptions {
    pub bounds: BoundPolicy,
    pub primed_order: PrimedOrder,
}

/// Stages follow the strongly connected components in dependency order and,
/// inside a component, ascending priority.
pub fn plan_stages(sys: &FixpointSystem) -> Result<StagePlan, QeError> {
    let mut order = Vec::new();
    for comp in sys.components() {
        let mut comp = comp.clone();
        comp.sort_by_key(|&i| (sys.equation(i).priority, i));
        order.extend(comp);
    }
    let mut stages: Vec<Stage> = Vec::new();
    for (k, &x) in order.iter().enumerate() {
        let staged = &order[..k];
        let mut priors: Vec<usize> = Vec::new();
        let mut frontier: Vec<usize> = sys.equation(x).rhs.vars().into_iter().collect();
        let mut params = Vec::new();
        while let Some(v) = frontier.pop() {
            if v == x || priors.contains(&v) || params.contains(&v) {
                continue;
            }
            match staged.iter().position(|&s| s == v) {
                Some(j) => {
                    priors.push(v);
                    frontier.extend(stages[j].params.iter().copied());
                }
                None => params.push(v),
            }
        }
        priors.sort_by_key(|v| staged.iter().position(|s| s == v));
        params.sort_unstable();
        stages.push(Stage { target: x, quantifier: sys.equation(x).quantifier, priors, params });
    }
    Ok(StagePlan { stages })
}

fn primed(n: usize, v: usize) -> usize {
    v + n
}

/// Builds the stage formula: earlier characterizations, the equation, the
/// optional bound, and the universal statement that every primed solution of
/// the same constraints lies above (μ) or below (ν) the target.
pub fn build_stage_formula(
    sys: &FixpointSystem,
    plan: &StagePlan,
    k: usize,
    prior_qf: &[Conjunction],
    options: &QeOptions,
) -> Result<FoFormula, QeError> {
    let stage = plan.stages.get(k).ok_or(QeError::StageOutOfRange(k))?;
    if prior_qf.len() != stage.priors.len() {
        let missing = stage.priors.get(prior_qf.len()).map_or_else(|| "?".to_string(), |&v| sys.name(v).to_string());
        return Err(QeError::MissingPrior(missing));
    }
    let n = sys.len();
    let x = stage.target;
    let moving: Vec<usize> = std::iter::once(x).chain(stage.priors.iter().copied()).collect();
    let prime = |v: usize| if moving.contains(&v) { primed(n, v) } else { v };

    let equation = Atom::new(Poly::var(x), Rel::Eq, sys.equation(x).rhs.clone());
    let with_bound = match options.bounds {
        BoundPolicy::Listings => stage.quantifier == Quantifier::Mu && !stage.priors.is_empty(),
        BoundPolicy::Uniform => true,
    };
    let bound = with_bound.then(|| match stage.quantifier {
        Quantifier::Mu => Atom::new(Poly::var(x), Rel::Le, Poly::one()),
        Quantifier::Nu => Atom::new(Poly::var(x), Rel::Ge, Poly::zero()),
    });
    let conclusion = match stage.quantifier {
        Quantifier::Mu => Atom::new(Poly::var(primed(n, x)), Rel::Ge, Poly::var(x)),
        Quantifier::Nu => Atom::new(Poly::var(primed(n, x)), Rel::Le, Poly::var(x)),
    };

    let mut prefix: Vec<(QKind, usize)> = stage.priors.iter().map(|&p| (QKind::Exists, p)).collect();
    prefix.push((QKind::Forall, primed(n, x)));
    prefix.extend(stage.priors.iter().map(|&p| (QKind::Forall, primed(n, p))));

    let matrix = if stage.priors.is_empty() && bound.is_none() {
        Matrix::And(vec![
            Matrix::atom(equation.clone()),
            Matrix::Implies(Box::new(Matrix::atom(equation.map_vars(prime))), Box::new(Matrix::atom(conclusion))),
        ])
    } else {
        let mut outer: Vec<Matrix> = prior_qf.iter().map(|c| Matrix::Conj(c.clone())).collect();
        outer.push(Matrix::atom(equation.clone()));
        outer.extend(bound.clone().map(Matrix::atom));
        let mut premise: Vec<Matrix> =
            prior_qf.iter().map(|c| Matrix::Conj(c.iter().map(|a| a.map_vars(prime)).collect())).collect();
        let eq_primed = Matrix::atom(equation.map_vars(prime));
        let bound_primed = bound.map(|b| Matrix::atom(b.map_vars(prime)));
        match options.primed_order {
            PrimedOrder::EquationFirst => {
                premise.push(eq_primed);
                premise.extend(bound_primed);
            }
            PrimedOrder::BoundFirst => {
                premise.extend(bound_primed);
                premise.push(eq_primed);
            }
        }
        outer.push(Matrix::Implies(Box::new(Matrix::And(premise)), Box::new(Matrix::atom(conclusion))));
        Matrix::And(outer)
    };

    let mut names: Vec<String> = (0..n).map(|i| sys.name(i).to_string()).collect();
    names.extend((0..n).map(|i| format!("{}prime", sys.name(i))));
    Ok(FoFormula { prefix, matrix, names })
}

/// Produces the characterization of a stage from its emitted input.
pub type ExternalAnswer<'a> = &'a mut dyn FnMut(&StageFile) -> Result<Conjunction, QeError>;

/// One emitted stage.
#[derive(Clone, Debug)]
pub struct StageFile {
    pub file_name: String,
    pub formula: FoFormula,
    /// The formula in listing layout.
    pub text: String,
    /// Complete qepcad input.
    pub input: String,
    /// Characterization used by later stages.
    pub answer: Conjunction,
}

/// Builds every stage, characterizing solved variables from `exact` or, when
/// given, from `external` (e.g. a qepcad run) which receives the stage input.
pub fn export_stages(
    sys: &FixpointSystem,
    system_name: &str,
    exact: Option<&ExactSolution>,
    options: &QeOptions,
    external: Option<ExternalAnswer<'_>>,
) -> Result<Vec<StageFile>, QeError> {
    let plan = plan_stages(sys)?;
    let mut external = external;
    let mut out: Vec<StageFile> = Vec::new();
    for (k, stage) in plan.stages.iter().enumerate() {
        let priors: Vec<Conjunction> = stage
            .priors
            .iter()
            .map(|&p| {
                let j = plan.stage_of(p).expect("prior is staged");
                out[j].answer.clone()
            })
            .collect();
        let formula = build_stage_formula(sys, &plan, k, &priors, options)?;
        let text = emit_qepcad(&formula);
        let quant = match stage.quantifier {
            Quantifier::Mu => "least",
            Quantifier::Nu => "greatest",
        };
        let comment = format!("{system_name} stage {}: {quant} solution for {}", k + 1, sys.name(stage.target));
        let input = qepcad_input(&formula, &comment);
        let mut file = StageFile {
            file_name: format!("{system_name}_stage{}.qe", k + 1),
            formula,
            text,
            input,
            answer: Vec::new(),
        };
        file.answer = match external.as_mut() {
            Some(run) => run(&file)?,
            None => qf_answer(sys, &plan, k, exact.map(|e| &e.values[stage.target]))?,
        };
        out.push(file);
    }
    Ok(out)
}
