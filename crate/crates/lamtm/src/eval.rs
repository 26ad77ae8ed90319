//! Weak deterministic evaluation with exact beta-step counting.
//!
//! Evaluation contexts are `E ::= <.> | E v`: the only reducible position
//! in an application is the function part, and only once the argument is a
//! value. On terms that fit the deterministic grammar this finds the unique
//! redex; on other terms it simply reports a normal form (the evaluator is
//! total, never an error).

use crate::term::{Term, TermKind};

/// Result of running the evaluator.
#[derive(Clone, Debug)]
pub struct EvalOutcome {
    pub result: Term,
    /// Exact number of beta-steps taken.
    pub steps: u64,
    /// True when fuel ran out before a normal form was reached.
    pub exhausted: bool,
}

/// Performs the unique weak deterministic step, if any. Returns `None` on
/// normal forms, including stuck applications headed by a free variable.
pub fn step_det(t: &Term) -> Option<Term> {
    match t.kind() {
        TermKind::Var(_) | TermKind::Abs(..) => None,
        TermKind::App(fun, arg) => {
            if !arg.is_value() {
                return None;
            }
            match fun.kind() {
                TermKind::Abs(param, body) => Some(body.substitute(param, arg)),
                _ => step_det(fun).map(|fun2| Term::app(fun2, arg.clone())),
            }
        }
    }
}

/// Iterates [`step_det`] until a normal form or until `fuel` steps have
/// been taken.
pub fn evaluate(t: &Term, fuel: u64) -> EvalOutcome {
    evaluate_observed(t, fuel, |_, _| {})
}

/// Like [`evaluate`] but calls `observer(steps_so_far, current_term)` after
/// every step, so callers can sample intermediate states.
pub fn evaluate_observed(t: &Term, fuel: u64, mut observer: impl FnMut(u64, &Term)) -> EvalOutcome {
    let mut current = t.clone();
    let mut steps = 0u64;
    while steps < fuel {
        match step_det(&current) {
            Some(next) => {
                steps += 1;
                observer(steps, &next);
                current = next;
            }
            None => {
                return EvalOutcome {
                    result: current,
                    steps,
                    exhausted: false,
                }
            }
        }
    }
    let exhausted = step_det(&current).is_some();
    EvalOutcome {
        result: current,
        steps,
        exhausted,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::{fixpoint, omega, parse_term};

    #[test]
    fn identity_redex() {
        let t = parse_term("(\\x. x) (\\y. y)").unwrap();
        assert_eq!(step_det(&t).unwrap(), parse_term("\\y. y").unwrap());
    }

    #[test]
    fn no_reduction_under_abstraction() {
        let t = parse_term("\\x. (\\y. y) x").unwrap();
        assert!(step_det(&t).is_none());
    }

    #[test]
    fn values_are_normal() {
        assert!(step_det(&Term::var("x")).is_none());
        assert!(step_det(&parse_term("\\x. x").unwrap()).is_none());
    }

    #[test]
    fn fix_of_value_in_two_steps() {
        // fix u ->det^2 u (\z. fix u z)
        let u = parse_term("\\a. \\b. b").unwrap();
        let t = Term::app(fixpoint(), u.clone());
        let s1 = step_det(&t).unwrap();
        let s2 = step_det(&s1).unwrap();
        let expected = Term::app(
            u.clone(),
            Term::abs("z", Term::apps(fixpoint(), [u, Term::var("z")])),
        );
        assert!(s2.alpha_eq(&expected));
    }

    #[test]
    fn fixpoint_alone_steps_once_then_halts() {
        // theta theta itself performs one step and then waits for an argument
        let fix = fixpoint();
        let s1 = step_det(&fix).unwrap();
        assert!(step_det(&s1).is_none());
    }

    #[test]
    fn evaluate_counts_exactly() {
        let t = parse_term("(\\x. x) (\\y. y)").unwrap();
        let out = evaluate(&t, 10);
        assert!(!out.exhausted);
        assert_eq!(out.steps, 1);
        assert_eq!(out.result, parse_term("\\y. y").unwrap());
    }

    #[test]
    fn omega_exhausts_fuel() {
        let out = evaluate(&omega(), 100);
        assert!(out.exhausted);
        assert_eq!(out.steps, 100);
    }

    #[test]
    fn rerun_with_more_fuel_is_stable() {
        let t = parse_term("(\\x. x x) (\\y. y)").unwrap();
        let a = evaluate(&t, 10);
        let b = evaluate(&t, 1_000_000);
        assert_eq!(a.steps, b.steps);
        assert_eq!(a.result, b.result);
    }

    #[test]
    fn free_variable_head_is_normal() {
        let t = Term::app(Term::var("k"), parse_term("\\x. x").unwrap());
        assert!(step_det(&t).is_none());
    }
}
