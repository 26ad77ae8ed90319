//! Two-tape deterministic Turing machines with a read-only input tape and a
//! read-write work tape, their textual `.tm` format, and a direct simulator
//! used as the independent oracle for the compiled lambda-terms.
//!
//! The input string always has the shape `L . payload . R` over the input
//! alphabet `0 1 L R`; the machine is assumed never to move the input head
//! beyond the markers (a violation is a hard error). The work tape is split
//! around its head; moving onto an empty half materializes exactly one
//! blank cell, and trailing blanks are never trimmed, so the space
//! high-water mark counts materialized cells.

use std::fmt;

use crate::encode::BLANK;

pub const INPUT_SYMBOLS: [char; 4] = ['0', '1', 'L', 'R'];
pub const WORK_SYMBOLS: [char; 3] = ['0', '1', BLANK];

#[derive(Debug, thiserror::Error)]
pub enum MachineError {
    #[error("malformed input string {0:?}: expected L <binary payload> R")]
    MalformedInput(String),
    #[error("input head moved out of bounds (index {index}, move {mv:+}) in state {state}")]
    Boundary { index: usize, mv: i8, state: String },
    #[error("configuration is invalid for this machine: {0}")]
    BadConfiguration(String),
}

#[derive(Debug, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct TmParseError {
    pub line: usize,
    pub message: String,
}

/// Work-head action of a transition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WorkMove {
    Left,
    Stay,
    Right,
}

impl fmt::Display for WorkMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WorkMove::Left => "L",
            WorkMove::Stay => "S",
            WorkMove::Right => "R",
        })
    }
}

/// One entry of the transition table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub input_sym: char,
    pub work_sym: char,
    pub state: String,
    pub input_move: i8,
    pub write: char,
    pub work_move: WorkMove,
    pub next: String,
}

/// A two-tape deterministic Turing machine. The state order is part of the
/// datum: it fixes the branch order of the compiled transition table and of
/// the output extractor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Machine {
    pub states: Vec<String>,
    pub initial: String,
    pub accept: String,
    pub reject: String,
    pub rules: Vec<Rule>,
}

impl Machine {
    pub fn is_final(&self, state: &str) -> bool {
        state == self.accept || state == self.reject
    }

    pub fn state_index(&self, state: &str) -> Option<usize> {
        self.states.iter().position(|s| s == state)
    }

    /// The partial transition function; first matching rule wins.
    pub fn delta(&self, input_sym: char, work_sym: char, state: &str) -> Option<&Rule> {
        self.rules
            .iter()
            .find(|r| r.input_sym == input_sym && r.work_sym == work_sym && r.state == state)
    }

    /// Structural diagnostics; an empty list means the machine is valid.
    pub fn validate(&self) -> Vec<String> {
        let mut diags = Vec::new();
        let mut seen = Vec::new();
        for s in &self.states {
            if seen.contains(&s) {
                diags.push(format!("duplicate state {s}"));
            }
            seen.push(s);
        }
        for (label, s) in [
            ("initial", &self.initial),
            ("accept", &self.accept),
            ("reject", &self.reject),
        ] {
            if self.state_index(s).is_none() {
                diags.push(format!("{label} state {s} is not declared"));
            }
        }
        if self.accept == self.reject {
            diags.push("accept and reject states coincide".into());
        }
        let mut keys = Vec::new();
        for r in &self.rules {
            if self.state_index(&r.state).is_none() {
                diags.push(format!("rule refers to unknown state {}", r.state));
            }
            if self.state_index(&r.next).is_none() {
                diags.push(format!("rule refers to unknown target state {}", r.next));
            }
            if self.is_final(&r.state) {
                diags.push(format!(
                    "delta defined on final state {} (symbols {} {})",
                    r.state, r.input_sym, r.work_sym
                ));
            }
            let key = (r.input_sym, r.work_sym, r.state.clone());
            if keys.contains(&key) {
                diags.push(format!(
                    "duplicate rule for ({} {} {})",
                    r.input_sym, r.work_sym, r.state
                ));
            }
            keys.push(key);
        }
        diags
    }
}

/// A full machine configuration. `work_left` is stored in natural order:
/// its last character is the cell adjacent to the work head.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Configuration {
    pub input: String,
    pub head_index: usize,
    pub work_left: String,
    pub work_head: char,
    pub work_right: String,
    pub state: String,
}

impl Configuration {
    pub fn work_cells(&self) -> usize {
        self.work_left.len() + 1 + self.work_right.len()
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {} | {:?}, {}, {:?} | {})",
            self.input,
            self.head_index,
            self.work_left,
            self.work_head,
            self.work_right,
            self.state
        )
    }
}

/// Outcome of a (possibly truncated) run.
#[derive(Clone, Debug)]
pub struct RunResult {
    pub final_config: Configuration,
    /// Number of transitions taken.
    pub steps: u64,
    /// High-water mark of materialized work-tape cells.
    pub work_space: usize,
    /// True iff a final state was reached.
    pub halted: bool,
    /// True iff the machine got stuck (delta undefined in a non-final
    /// state); such a machine is invalid rather than halted.
    pub stuck: bool,
}

/// Checks the `L . payload . R` shape of an input string.
pub fn check_input(input: &str) -> Result<(), MachineError> {
    let bad = || MachineError::MalformedInput(input.to_string());
    let mut chars = input.chars();
    if chars.next() != Some('L') {
        return Err(bad());
    }
    let rest: Vec<char> = chars.collect();
    match rest.split_last() {
        Some(('R', payload)) if payload.iter().all(|c| *c == '0' || *c == '1') => Ok(()),
        _ => Err(bad()),
    }
}

/// Wraps a binary payload in the input markers.
pub fn wrap_payload(payload: &str) -> Result<String, MachineError> {
    let input = format!("L{payload}R");
    check_input(&input)?;
    Ok(input)
}

/// `C_in(i) = (i, 0 | eps, blank, eps | initial)`.
pub fn initial_config(machine: &Machine, input: &str) -> Result<Configuration, MachineError> {
    check_input(input)?;
    Ok(Configuration {
        input: input.to_string(),
        head_index: 0,
        work_left: String::new(),
        work_head: BLANK,
        work_right: String::new(),
        state: machine.initial.clone(),
    })
}

/// Applies the transition function once. `Ok(None)` means the
/// configuration cannot evolve: its state is final, or delta is undefined
/// on it.
pub fn step_machine(
    machine: &Machine,
    config: &Configuration,
) -> Result<Option<Configuration>, MachineError> {
    if machine.is_final(&config.state) {
        return Ok(None);
    }
    let input_sym = config.input.chars().nth(config.head_index).ok_or_else(|| {
        MachineError::BadConfiguration(format!(
            "input head index {} out of range",
            config.head_index
        ))
    })?;
    let rule = match machine.delta(input_sym, config.work_head, &config.state) {
        Some(r) => r,
        None => return Ok(None),
    };
    let new_index = config.head_index as i64 + i64::from(rule.input_move);
    if new_index < 0 || new_index as usize >= config.input.chars().count() {
        return Err(MachineError::Boundary {
            index: config.head_index,
            mv: rule.input_move,
            state: config.state.clone(),
        });
    }
    // write first, then move
    let (work_left, work_head, work_right) = match rule.work_move {
        WorkMove::Stay => (
            config.work_left.clone(),
            rule.write,
            config.work_right.clone(),
        ),
        WorkMove::Left => {
            let mut left = config.work_left.clone();
            let head = left.pop().unwrap_or(BLANK);
            (left, head, format!("{}{}", rule.write, config.work_right))
        }
        WorkMove::Right => {
            let mut right = config.work_right.clone();
            let head = if right.is_empty() {
                BLANK
            } else {
                right.remove(0)
            };
            (format!("{}{}", config.work_left, rule.write), head, right)
        }
    };
    Ok(Some(Configuration {
        input: config.input.clone(),
        head_index: new_index as usize,
        work_left,
        work_head,
        work_right,
        state: rule.next.clone(),
    }))
}

/// Runs the machine from the initial configuration for `input`, for at most
/// `max_steps` transitions.
pub fn run_machine(
    machine: &Machine,
    input: &str,
    max_steps: u64,
) -> Result<RunResult, MachineError> {
    let mut config = initial_config(machine, input)?;
    let mut steps = 0u64;
    let mut work_space = config.work_cells();
    while steps < max_steps {
        match step_machine(machine, &config)? {
            Some(next) => {
                steps += 1;
                work_space = work_space.max(next.work_cells());
                config = next;
            }
            None => break,
        }
    }
    let halted = machine.is_final(&config.state);
    let stuck = !halted && step_machine(machine, &config)?.is_none();
    Ok(RunResult {
        final_config: config,
        steps,
        work_space,
        halted,
        stuck,
    })
}

// --- textual format -------------------------------------------------------

/// Parses the line-oriented `.tm` format:
///
/// ```text
/// states: s1 s2 ...        # order significant
/// initial: s
/// accept: s
/// reject: s
/// rule <in> <work> <state> -> <imove> <write> <wmove> <state>
/// ```
///
/// Input symbols are `0 1 L R`, work symbols `0 1 _`, input moves
/// `-1 0 +1`, work moves `L S R`. `#` starts a comment.
pub fn parse_machine(text: &str) -> Result<Machine, TmParseError> {
    let mut states: Option<Vec<String>> = None;
    let mut initial = None;
    let mut accept = None;
    let mut reject = None;
    let mut rules = Vec::new();

    let err = |line: usize, message: String| TmParseError { line, message };

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("states:") {
            states = Some(rest.split_whitespace().map(str::to_owned).collect());
        } else if let Some(rest) = line.strip_prefix("initial:") {
            initial = Some(rest.trim().to_string());
        } else if let Some(rest) = line.strip_prefix("accept:") {
            accept = Some(rest.trim().to_string());
        } else if let Some(rest) = line.strip_prefix("reject:") {
            reject = Some(rest.trim().to_string());
        } else if let Some(rest) = line.strip_prefix("rule") {
            let (lhs, rhs) = rest
                .split_once("->")
                .ok_or_else(|| err(line_no, "rule is missing '->'".into()))?;
            let lhs: Vec<&str> = lhs.split_whitespace().collect();
            let rhs: Vec<&str> = rhs.split_whitespace().collect();
            if lhs.len() != 3 || rhs.len() != 4 {
                return Err(err(
                    line_no,
                    "rule needs '<in> <work> <state> -> <imove> <write> <wmove> <state>'".into(),
                ));
            }
            let sym = |s: &str, allowed: &[char], what: &str| -> Result<char, TmParseError> {
                let c = s
                    .chars()
                    .next()
                    .filter(|c| s.len() == 1 && allowed.contains(c));
                c.ok_or_else(|| err(line_no, format!("bad {what} symbol {s:?}")))
            };
            let input_sym = sym(lhs[0], &INPUT_SYMBOLS, "input")?;
            let work_sym = sym(lhs[1], &WORK_SYMBOLS, "work")?;
            let input_move = match rhs[0] {
                "-1" => -1,
                "0" => 0,
                "+1" => 1,
                other => return Err(err(line_no, format!("bad input move {other:?}"))),
            };
            let write = sym(rhs[1], &WORK_SYMBOLS, "written work")?;
            let work_move = match rhs[2] {
                "L" => WorkMove::Left,
                "S" => WorkMove::Stay,
                "R" => WorkMove::Right,
                other => return Err(err(line_no, format!("bad work move {other:?}"))),
            };
            rules.push(Rule {
                input_sym,
                work_sym,
                state: lhs[2].to_string(),
                input_move,
                write,
                work_move,
                next: rhs[3].to_string(),
            });
        } else {
            return Err(err(line_no, format!("unrecognized line {line:?}")));
        }
    }

    let machine = Machine {
        states: states.ok_or_else(|| err(0, "missing 'states:' line".into()))?,
        initial: initial.ok_or_else(|| err(0, "missing 'initial:' line".into()))?,
        accept: accept.ok_or_else(|| err(0, "missing 'accept:' line".into()))?,
        reject: reject.ok_or_else(|| err(0, "missing 'reject:' line".into()))?,
        rules,
    };
    Ok(machine)
}

impl fmt::Display for Machine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "states: {}", self.states.join(" "))?;
        writeln!(f, "initial: {}", self.initial)?;
        writeln!(f, "accept: {}", self.accept)?;
        writeln!(f, "reject: {}", self.reject)?;
        for r in &self.rules {
            writeln!(
                f,
                "rule {} {} {} -> {} {} {} {}",
                r.input_sym,
                r.work_sym,
                r.state,
                match r.input_move {
                    -1 => "-1",
                    0 => "0",
                    _ => "+1",
                },
                r.write,
                r.work_move,
                r.next
            )?;
        }
        Ok(())
    }
}
