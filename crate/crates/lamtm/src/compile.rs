//! Compilation of machines and configurations into lambda-terms.
//!
//! A configuration becomes the six-slot Scott tuple
//! `\v. v <input> <counter> <reversed left work tape> <head symbol>
//! <right work tape> <state>`. The transition function becomes a recursive
//! term `trans = fix transaux` that looks up the current input bit through
//! the positional counter, then selects a branch by input bit, work symbol
//! and state, updates the counter with the successor/predecessor terms, and
//! rebuilds the next configuration with the constant-time append
//! combinator. `init` builds the initial configuration in exactly 5 steps,
//! `final` projects the halting state onto a lambda-boolean, and the whole
//! machine is their eta-expanded composition.

use crate::encode::{Alphabet, EncodeError, BLANK};
use crate::machine::{Configuration, Machine, Rule, WorkMove};
use crate::revbin::{bitstring_term, decode_bitstring, BitString};
use crate::revbin::{lookup_term, pred_term, succ_term};
use crate::term::{fixpoint, omega, Term, TermKind};

#[derive(Debug, thiserror::Error)]
pub enum CompileError {
    #[error(transparent)]
    Encode(#[from] EncodeError),
    #[error("state {0} is not a state of this machine")]
    UnknownState(String),
    #[error("term is not a configuration encoding: {0}")]
    Malformed(String),
    #[error("head index {0} does not fit the counter representation")]
    BadIndex(u64),
}

/// A machine together with its compiled terms. All four terms are closed
/// members of the deterministic calculus.
#[derive(Clone, Debug)]
pub struct CompiledMachine {
    pub machine: Machine,
    pub trans: Term,
    pub init: Term,
    pub final_term: Term,
    /// `init (\y. trans (\x. final I x) y)`: applied to an encoded input
    /// string, evaluates to the lambda-boolean of the machine's output.
    pub whole: Term,
}

fn v(n: &str) -> Term {
    Term::var(n)
}

/// `<t1, t2 | t3, t4, t5 | t6> = \v. v t1 t2 t3 t4 t5 t6`.
fn tuple6(slots: [Term; 6]) -> Term {
    Term::abs("v", Term::apps(v("v"), slots))
}

fn encode_state(machine: &Machine, state: &str) -> Result<Term, CompileError> {
    let idx = machine
        .state_index(state)
        .ok_or_else(|| CompileError::UnknownState(state.to_string()))?;
    Ok(crate::encode::projection(machine.states.len(), idx))
}

fn decode_state(machine: &Machine, t: &Term) -> Result<String, CompileError> {
    let idx = crate::encode::decode_projection(t, machine.states.len())?;
    Ok(machine.states[idx].clone())
}

/// Scott encoding of a machine configuration. The left work tape is stored
/// reversed, so its Scott head is the cell adjacent to the work head.
pub fn encode_config(machine: &Machine, config: &Configuration) -> Result<Term, CompileError> {
    let input_a = Alphabet::input();
    let work_a = Alphabet::work();
    let reversed_left: String = config.work_left.chars().rev().collect();
    Ok(tuple6([
        input_a.encode_string(&config.input)?,
        bitstring_term(&BitString::from_nat(config.head_index as u64)),
        work_a.encode_string(&reversed_left)?,
        work_a.encode_symbol(config.work_head)?,
        work_a.encode_string(&config.work_right)?,
        encode_state(machine, &config.state)?,
    ]))
}

/// Inverse of [`encode_config`], up to alpha.
pub fn decode_config(machine: &Machine, t: &Term) -> Result<Configuration, CompileError> {
    let (binder, body) = match t.kind() {
        TermKind::Abs(p, b) => (p.clone(), b.clone()),
        _ => return Err(CompileError::Malformed("not an abstraction".into())),
    };
    let mut spine = Vec::new();
    let mut cur = body;
    loop {
        match cur.kind() {
            TermKind::App(fun, arg) => {
                spine.push(arg.clone());
                cur = fun.clone();
            }
            TermKind::Var(name) if *name == binder => break,
            _ => {
                return Err(CompileError::Malformed(
                    "tuple head is not the bound variable".into(),
                ))
            }
        }
    }
    if spine.len() != 6 {
        return Err(CompileError::Malformed(format!(
            "expected 6 tuple slots, found {}",
            spine.len()
        )));
    }
    spine.reverse();
    let input_a = Alphabet::input();
    let work_a = Alphabet::work();
    let head_index = decode_bitstring(&spine[1])
        .map_err(|e| CompileError::Malformed(format!("counter slot: {e}")))?
        .to_nat();
    let reversed_left = work_a.decode_string(&spine[2])?;
    Ok(Configuration {
        input: input_a.decode_string(&spine[0])?,
        head_index: head_index as usize,
        work_left: reversed_left.chars().rev().collect(),
        work_head: work_a.decode_symbol(&spine[3])?,
        work_right: work_a.decode_string(&spine[4])?,
        state: decode_state(machine, &spine[5])?,
    })
}

/// The branch term for coordinates (input bit `b`, work symbol `a`, state
/// `q`). It receives the recursion variable, the continuation and the four
/// remaining configuration slots, the head symbol and state having been
/// consumed as selectors.
fn branch(
    machine: &Machine,
    b: char,
    a: char,
    q: &str,
    succ: &Term,
    pred: &Term,
) -> Result<Term, CompileError> {
    let work_a = Alphabet::work();
    let binders = ["x", "k", "inp", "cnt", "wl", "wr"];

    if machine.is_final(q) {
        // hand the unchanged configuration to the continuation
        let body = Term::app(
            v("k"),
            tuple6([
                v("inp"),
                v("cnt"),
                v("wl"),
                work_a.encode_symbol(a)?,
                v("wr"),
                encode_state(machine, q)?,
            ]),
        );
        return Ok(Term::lams(binders, body));
    }

    let rule = match machine.delta(b, a, q) {
        Some(r) => r,
        // delta is partial: an undefined non-final entry has no successor
        // configuration, so the branch diverges (it is unreachable on
        // machines that are total until a final state)
        None => return Ok(Term::lams(binders, omega())),
    };

    let action = tape_action(machine, rule)?;
    let body = match rule.input_move {
        0 => Term::app(action, v("cnt")),
        -1 => Term::apps(pred.clone(), [action, v("cnt")]),
        _ => Term::apps(succ.clone(), [action, v("cnt")]),
    };
    Ok(Term::lams(binders, body))
}

/// The work-tape action of a rule, abstracted over the updated counter.
fn tape_action(machine: &Machine, rule: &Rule) -> Result<Term, CompileError> {
    let work_a = Alphabet::work();
    let write = work_a.encode_symbol(rule.write)?;
    let next_state = encode_state(machine, &rule.next)?;
    let append_written = work_a.append_char_term(rule.write)?;

    match rule.work_move {
        WorkMove::Stay => Ok(Term::abs(
            "n2",
            Term::apps(
                v("x"),
                [
                    v("k"),
                    tuple6([v("inp"), v("n2"), v("wl"), write, v("wr"), next_state]),
                ],
            ),
        )),
        WorkMove::Left => {
            // destruct the reversed left tape; the written symbol is
            // prepended to the right tape by the append combinator
            let mut move_branches = Vec::new();
            for &a2 in work_a.symbols() {
                let cont = Term::abs(
                    "wr",
                    Term::apps(
                        v("x"),
                        [
                            v("k"),
                            tuple6([
                                v("inp"),
                                v("cnt"),
                                v("wl"),
                                work_a.encode_symbol(a2)?,
                                v("wr"),
                                next_state.clone(),
                            ]),
                        ],
                    ),
                );
                move_branches.push(Term::lams(
                    ["wl", "x", "k", "inp", "cnt"],
                    Term::app(append_written.clone(), cont),
                ));
            }
            // empty left tape: the new head cell is a blank; the argument
            // carrying the empty tape is eta-expanded to stay inside the
            // deterministic grammar
            let cont_empty = Term::abs(
                "w",
                Term::apps(
                    Term::lams(
                        ["d", "wr"],
                        Term::apps(
                            v("x"),
                            [
                                v("k"),
                                tuple6([
                                    v("inp"),
                                    v("cnt"),
                                    v("d"),
                                    work_a.encode_symbol(BLANK)?,
                                    v("wr"),
                                    next_state.clone(),
                                ]),
                            ],
                        ),
                    ),
                    [work_a.encode_string("")?, v("w")],
                ),
            );
            move_branches.push(Term::lams(
                ["x", "k", "inp", "cnt"],
                Term::app(append_written, cont_empty),
            ));
            let mut args = move_branches;
            args.extend([v("x"), v("k"), v("inp"), v("n2"), v("wr")]);
            Ok(Term::abs("n2", Term::apps(v("wl"), args)))
        }
        WorkMove::Right => {
            let mut move_branches = Vec::new();
            for &a2 in work_a.symbols() {
                let cont = Term::abs(
                    "wl",
                    Term::apps(
                        v("x"),
                        [
                            v("k"),
                            tuple6([
                                v("inp"),
                                v("cnt"),
                                v("wl"),
                                work_a.encode_symbol(a2)?,
                                v("wr"),
                                next_state.clone(),
                            ]),
                        ],
                    ),
                );
                move_branches.push(Term::lams(
                    ["wr", "x", "k", "inp", "cnt"],
                    Term::app(append_written.clone(), cont),
                ));
            }
            let cont_empty = Term::abs(
                "w",
                Term::apps(
                    Term::lams(
                        ["d", "wl"],
                        Term::apps(
                            v("x"),
                            [
                                v("k"),
                                tuple6([
                                    v("inp"),
                                    v("cnt"),
                                    v("wl"),
                                    work_a.encode_symbol(BLANK)?,
                                    v("d"),
                                    next_state.clone(),
                                ]),
                            ],
                        ),
                    ),
                    [work_a.encode_string("")?, v("w")],
                ),
            );
            move_branches.push(Term::lams(
                ["x", "k", "inp", "cnt"],
                Term::app(append_written, cont_empty),
            ));
            let mut args = move_branches;
            args.extend([v("x"), v("k"), v("inp"), v("n2"), v("wl")]);
            Ok(Term::abs("n2", Term::apps(v("wr"), args)))
        }
    }
}

/// The recursive transition term `fix transaux`. `transaux` destructures
/// the configuration, retrieves the scanned input bit by positional lookup,
/// and dispatches through the three-dimensional branch table in the fixed
/// order input bit, work symbol, state.
pub fn build_trans(machine: &Machine) -> Result<Term, CompileError> {
    let input_a = Alphabet::input();
    let work_a = Alphabet::work();
    let succ = succ_term();
    let pred = pred_term();

    let mut bit_tables = Vec::new();
    for &b in input_a.symbols() {
        let mut work_tables = Vec::new();
        for &a in work_a.symbols() {
            let branches = machine
                .states
                .iter()
                .map(|q| branch(machine, b, a, q, &succ, &pred))
                .collect::<Result<Vec<_>, _>>()?;
            work_tables.push(Term::abs("sel", Term::apps(v("sel"), branches)));
        }
        bit_tables.push(Term::abs("sel", Term::apps(v("sel"), work_tables)));
    }

    // lookup continuation: selects the bit table, then threads the head
    // symbol, the state and the remaining slots through the selectors
    let mut t_args = bit_tables;
    t_args.extend([
        v("wh"),
        v("st"),
        v("x"),
        v("k"),
        v("inp"),
        v("cnt"),
        v("wl"),
        v("wr"),
    ]);
    let t_cont = Term::abs("b", Term::apps(v("b"), t_args));

    let destructured = Term::lams(
        ["inp", "cnt", "wl", "wh", "wr", "st"],
        Term::apps(lookup_term(&input_a), [t_cont, v("cnt"), v("inp")]),
    );
    let transaux = Term::lams(["x", "k", "cfg"], Term::app(v("cfg"), destructured));
    Ok(Term::app(fixpoint(), transaux))
}

/// Term turning an encoded input string into the encoded initial
/// configuration: `init k <i>` takes exactly 5 steps to `k <C_in(i)>`. The
/// term is deliberately left partially unapplied rather than normalized.
pub fn build_init(machine: &Machine) -> Result<Term, CompileError> {
    let work_a = Alphabet::work();
    let header = Term::lams(
        ["d", "e", "f", "k", "inp"],
        Term::app(
            v("k"),
            tuple6([
                v("inp"),
                v("d"),
                v("e"),
                work_a.encode_symbol(BLANK)?,
                v("f"),
                encode_state(machine, &machine.initial)?,
            ]),
        ),
    );
    Ok(Term::apps(
        header,
        [
            bitstring_term(&BitString::zero()),
            work_a.encode_string("")?,
            work_a.encode_string("")?,
        ],
    ))
}

/// Term extracting the lambda-boolean from a final configuration:
/// `final k <C>` yields `k (\x.\y.x)` when the state is the accept state
/// and `k (\x.\y.y)` when it is the reject state, in `|Q| + 10` steps.
pub fn build_final(machine: &Machine) -> Result<Term, CompileError> {
    let selectors: Vec<Term> = machine
        .states
        .iter()
        .map(|q| {
            if q == &machine.accept {
                Term::abs("k", Term::app(v("k"), true_term()))
            } else if q == &machine.reject {
                Term::abs("k", Term::app(v("k"), false_term()))
            } else {
                // never selected on final configurations
                Term::abs("z", v("z"))
            }
        })
        .collect();
    let mut args = selectors;
    args.push(v("k"));
    let consumer = Term::lams(
        ["inp", "cnt", "wl", "wh", "wr", "st"],
        Term::apps(v("st"), args),
    );
    Ok(Term::lams(["k", "cfg"], Term::app(v("cfg"), consumer)))
}

pub fn true_term() -> Term {
    Term::lams(["x", "y"], v("x"))
}

pub fn false_term() -> Term {
    Term::lams(["x", "y"], v("y"))
}

/// Recognizes the lambda-booleans up to alpha.
pub fn decode_boolean(t: &Term) -> Result<bool, CompileError> {
    if t.alpha_eq(&true_term()) {
        Ok(true)
    } else if t.alpha_eq(&false_term()) {
        Ok(false)
    } else {
        Err(CompileError::Malformed(format!("not a boolean: {t}")))
    }
}

/// Scott encoding of an input string over the input alphabet.
pub fn encode_input(input: &str) -> Result<Term, CompileError> {
    Ok(Alphabet::input().encode_string(input)?)
}

/// Compiles the whole machine. The composition
/// `init (\y. trans (\x. final I x) y)` is eta-expanded at the two
/// argument positions so that every application argument is a value.
pub fn compile_machine(machine: &Machine) -> Result<CompiledMachine, CompileError> {
    let trans = build_trans(machine)?;
    let init = build_init(machine)?;
    let final_term = build_final(machine)?;
    let identity = Term::abs("z", v("z"));
    let whole = Term::app(
        init.clone(),
        Term::abs(
            "y",
            Term::app(
                Term::app(
                    trans.clone(),
                    Term::abs("x", Term::apps(final_term.clone(), [identity, v("x")])),
                ),
                v("y"),
            ),
        ),
    );
    Ok(CompiledMachine {
        machine: machine.clone(),
        trans,
        init,
        final_term,
        whole,
    })
}

/// Testing aid: a copy of `machine` in which the rule selected by
/// `(input_sym, work_sym, state)` is retargeted to a fresh state that is
/// final (it replaces the reject state), so a single machine transition can
/// be observed at the lambda level. The fresh state is appended at the end
/// of the state order, leaving every existing branch index unchanged.
pub fn truncate_transition(
    machine: &Machine,
    input_sym: char,
    work_sym: char,
    state: &str,
) -> Option<(Machine, String)> {
    machine.delta(input_sym, work_sym, state)?;
    let mut fresh = "halt".to_string();
    while machine.states.contains(&fresh) {
        fresh.push('_');
    }
    let mut truncated = machine.clone();
    truncated.states.push(fresh.clone());
    truncated.reject = fresh.clone();
    for r in &mut truncated.rules {
        if r.input_sym == input_sym && r.work_sym == work_sym && r.state == state {
            r.next = fresh.clone();
        }
    }
    // rules on the former reject state would now be non-final entries, but
    // the reject state never carries rules in a valid machine
    Some((truncated, fresh))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::eval::{evaluate, step_det};
    use crate::machine::{initial_config, run_machine, step_machine};

    fn marker_result(t: &Term, fuel: u64) -> (Term, u64) {
        let out = evaluate(t, fuel);
        assert!(!out.exhausted, "fuel exhausted after {} steps", out.steps);
        match out.result.kind() {
            TermKind::App(k, payload) => {
                assert_eq!(k.clone(), Term::var("K"));
                (payload.clone(), out.steps)
            }
            _ => panic!("result not of shape K v: {}", out.result),
        }
    }

    #[test]
    fn config_roundtrip() {
        let m = corpus::eq_fixed();
        let c = Configuration {
            input: "L101R".into(),
            head_index: 3,
            work_left: "01_".into(),
            work_head: '1',
            work_right: "0".into(),
            state: "rew".into(),
        };
        let t = encode_config(&m, &c).unwrap();
        assert!(t.is_closed() && t.is_lamdet());
        assert_eq!(decode_config(&m, &t).unwrap(), c);
    }

    #[test]
    fn work_left_is_stored_reversed() {
        let m = corpus::eq_fixed();
        let c = Configuration {
            input: "LR".into(),
            head_index: 0,
            work_left: "01_".into(),
            work_head: '0',
            work_right: String::new(),
            state: "copy".into(),
        };
        let t = encode_config(&m, &c).unwrap();
        // slot 3 of the tuple holds "_10"
        match t.kind() {
            TermKind::Abs(_, body) => {
                let mut spine = Vec::new();
                let mut cur = body.clone();
                while let TermKind::App(f, a) = cur.kind() {
                    spine.push(a.clone());
                    cur = f.clone();
                }
                spine.reverse();
                let slot3 = &spine[2];
                assert_eq!(Alphabet::work().decode_string(slot3).unwrap(), "_10");
            }
            _ => panic!(),
        }
    }

    #[test]
    fn decode_rejects_non_configs() {
        let m = corpus::parity();
        assert!(decode_config(&m, &Term::abs("x", v("x"))).is_err());
    }

    #[test]
    fn init_five_steps_and_correct() {
        let m = corpus::parity();
        let init = build_init(&m).unwrap();
        assert!(init.is_closed() && init.is_lamdet());
        for input in ["LR", "L1R", "L10011010R"] {
            let t = Term::apps(init.clone(), [Term::var("K"), encode_input(input).unwrap()]);
            let (payload, steps) = marker_result(&t, 100);
            assert_eq!(steps, 5, "init on {input}");
            assert_eq!(
                decode_config(&m, &payload).unwrap(),
                initial_config(&m, input).unwrap()
            );
        }
    }

    #[test]
    fn final_projects_booleans() {
        let m = corpus::parity();
        let final_term = build_final(&m).unwrap();
        assert!(final_term.is_closed() && final_term.is_lamdet());
        for (state, expect) in [(m.accept.clone(), true), (m.reject.clone(), false)] {
            let c = Configuration {
                input: "L1R".into(),
                head_index: 2,
                work_left: String::new(),
                work_head: BLANK,
                work_right: String::new(),
                state,
            };
            let t = Term::apps(
                final_term.clone(),
                [Term::var("K"), encode_config(&m, &c).unwrap()],
            );
            let (payload, steps) = marker_result(&t, 1000);
            assert_eq!(decode_boolean(&payload).unwrap(), expect);
            assert_eq!(steps as usize, m.states.len() + 10);
        }
    }

    #[test]
    fn trans_is_idempotent_on_final_configurations() {
        let m = corpus::parity();
        let trans = build_trans(&m).unwrap();
        assert!(trans.is_closed() && trans.is_lamdet());
        let c = Configuration {
            input: "L11R".into(),
            head_index: 3,
            work_left: String::new(),
            work_head: BLANK,
            work_right: String::new(),
            state: m.accept.clone(),
        };
        let t = Term::apps(trans, [Term::var("K"), encode_config(&m, &c).unwrap()]);
        let (payload, _) = marker_result(&t, 100_000);
        assert_eq!(decode_config(&m, &payload).unwrap(), c);
    }

    #[test]
    fn one_step_simulation_via_truncation() {
        // every reachable one-step pair on a short parity run
        let m = corpus::parity();
        let mut c = initial_config(&m, "L10R").unwrap();
        loop {
            let d = match step_machine(&m, &c).unwrap() {
                Some(d) => d,
                None => break,
            };
            let input_sym = c.input.chars().nth(c.head_index).unwrap();
            let (tm, fresh) = truncate_transition(&m, input_sym, c.work_head, &c.state).unwrap();
            let trans = build_trans(&tm).unwrap();
            let t = Term::apps(trans, [Term::var("K"), encode_config(&tm, &c).unwrap()]);
            let (payload, _) = marker_result(&t, 1_000_000);
            let decoded = decode_config(&tm, &payload).unwrap();
            assert_eq!(decoded.state, fresh);
            assert_eq!(
                Configuration {
                    state: d.state.clone(),
                    ..decoded
                },
                d
            );
            c = d;
        }
    }

    #[test]
    fn blank_materialization_left_branch() {
        // a left work-move from an empty left tape ends with a blank head
        let m = corpus::eq_fixed();
        let c = Configuration {
            input: "LR".into(),
            head_index: 1,
            work_left: String::new(),
            work_head: BLANK,
            work_right: String::new(),
            state: "copy".into(),
        };
        let d = step_machine(&m, &c).unwrap().unwrap();
        assert_eq!(d.work_head, BLANK);
        assert_eq!(d.work_right, "_");
        let (tm, fresh) = truncate_transition(&m, 'R', BLANK, "copy").unwrap();
        let trans = build_trans(&tm).unwrap();
        let t = Term::apps(trans, [Term::var("K"), encode_config(&tm, &c).unwrap()]);
        let (payload, _) = marker_result(&t, 1_000_000);
        let decoded = decode_config(&tm, &payload).unwrap();
        assert_eq!(decoded.state, fresh);
        assert_eq!(decoded.work_head, BLANK);
        assert_eq!(decoded.work_right, "_");
    }

    #[test]
    fn whole_machine_is_lamdet_and_agrees_on_small_inputs() {
        let m = corpus::parity();
        let compiled = compile_machine(&m).unwrap();
        assert!(compiled.whole.is_closed());
        assert!(compiled.whole.is_lamdet());
        for payload in ["", "1", "01", "11", "101"] {
            let input = format!("L{payload}R");
            let oracle = run_machine(&m, &input, 10_000).unwrap();
            assert!(oracle.halted);
            let expect = oracle.final_config.state == m.accept;
            let t = Term::app(compiled.whole.clone(), encode_input(&input).unwrap());
            let out = evaluate(&t, 10_000_000);
            assert!(!out.exhausted);
            assert_eq!(
                decode_boolean(&out.result).unwrap(),
                expect,
                "payload {payload:?}"
            );
        }
    }

    #[test]
    fn compilation_is_deterministic() {
        let m = corpus::first_last();
        let a = compile_machine(&m).unwrap();
        let b = compile_machine(&m).unwrap();
        assert_eq!(a.whole.to_string(), b.whole.to_string());
    }

    #[test]
    fn encode_config_alpha_invariance() {
        // building the same configuration through the printer and back
        // yields an alpha-equal (here even syntactically equal) term
        let m = corpus::parity();
        let c = initial_config(&m, "L1R").unwrap();
        let t = encode_config(&m, &c).unwrap();
        let reparsed = crate::term::parse_term(&t.to_string()).unwrap();
        assert!(t.alpha_eq(&reparsed));
    }

    #[test]
    fn stepping_preserves_lamdet_on_whole_run() {
        let m = corpus::parity();
        let compiled = compile_machine(&m).unwrap();
        let mut t = Term::app(compiled.whole, encode_input("L11R").unwrap());
        for _ in 0..5_000 {
            assert!(t.is_lamdet());
            match step_det(&t) {
                Some(next) => t = next,
                None => return,
            }
        }
        panic!("run did not terminate in 5000 steps");
    }
}
