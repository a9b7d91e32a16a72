//! The line-oriented `.aut` text format.
//!
//! ```text
//! automaton <name>
//! events <n>
//! <event-name> <c|u> <o|n>        # n lines
//! states <n>
//! <state-name> ... <state-name>   # n tokens on one or more lines
//! initial <state-name>
//! marked <k> [<state-name> ...]
//! trans <m>
//! <src> <event> <dst>             # m lines
//! end
//! ```
//!
//! `#` starts a comment. A file holds one or more `automaton` blocks with
//! distinct names. [`serialize_automaton`] emits the canonical form: states
//! in automaton order, transitions sorted by source then event.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use crate::alphabet::Alphabet;
use crate::automaton::{Automaton, AutomatonError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("{line}:{col}: syntax error: {message}")]
    Syntax { line: usize, col: usize, message: String },
    #[error("{line}:{col}: duplicate {kind} `{name}`")]
    Duplicate {
        line: usize,
        col: usize,
        kind: &'static str,
        name: String,
    },
    #[error("{line}:{col}: unknown {kind} `{name}`")]
    Unknown {
        line: usize,
        col: usize,
        kind: &'static str,
        name: String,
    },
    #[error("{line}:{col}: nondeterministic transition: `{state}` already has a different `{event}` successor")]
    Nondeterministic {
        line: usize,
        col: usize,
        state: String,
        event: String,
    },
}

impl ParseError {
    pub fn is_nondeterminism(&self) -> bool {
        matches!(self, ParseError::Nondeterministic { .. })
    }
}

#[derive(Debug, Clone)]
struct Token<'a> {
    text: &'a str,
    line: usize,
    col: usize,
}

struct Tokens<'a> {
    tokens: Vec<Token<'a>>,
    pos: usize,
    eof: (usize, usize),
}

impl<'a> Tokens<'a> {
    fn new(text: &'a str) -> Self {
        let mut tokens = Vec::new();
        let mut last_line = 1;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            last_line = line;
            let content = raw.split('#').next().unwrap_or("");
            let mut offset = 0;
            for piece in content.split_whitespace() {
                let rel = content[offset..].find(piece).unwrap_or(0);
                let start = offset + rel;
                offset = start + piece.len();
                tokens.push(Token {
                    text: piece,
                    line,
                    col: content[..start].chars().count() + 1,
                });
            }
        }
        Tokens {
            tokens,
            pos: 0,
            eof: (last_line, 1),
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.tokens.len()
    }

    fn where_(&self) -> (usize, usize) {
        self.tokens.get(self.pos).map(|t| (t.line, t.col)).unwrap_or(self.eof)
    }

    fn syntax(&self, message: impl Into<String>) -> ParseError {
        let (line, col) = self.where_();
        ParseError::Syntax {
            line,
            col,
            message: message.into(),
        }
    }

    fn next(&mut self, what: &str) -> Result<Token<'a>, ParseError> {
        match self.tokens.get(self.pos) {
            Some(t) => {
                self.pos += 1;
                Ok(t.clone())
            }
            None => Err(self.syntax(format!("unexpected end of input, expected {what}"))),
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<Token<'a>, ParseError> {
        let (line, col) = self.where_();
        let t = self.next(&format!("`{kw}`"))?;
        if t.text != kw {
            return Err(ParseError::Syntax {
                line,
                col,
                message: format!("expected `{kw}`, found `{}`", t.text),
            });
        }
        Ok(t)
    }

    fn count(&mut self, what: &str) -> Result<usize, ParseError> {
        let t = self.next(what)?;
        t.text.parse::<usize>().map_err(|_| ParseError::Syntax {
            line: t.line,
            col: t.col,
            message: format!("expected a count for {what}, found `{}`", t.text),
        })
    }
}

/// Parses every automaton block in `text`, in file order.
pub fn parse_automata(text: &str) -> Result<Vec<Automaton>, ParseError> {
    let mut toks = Tokens::new(text);
    let mut out = Vec::new();
    let mut names = HashSet::new();
    while !toks.at_end() {
        toks.keyword("automaton")?;
        let name = toks.next("automaton name")?;
        if !names.insert(name.text) {
            return Err(ParseError::Duplicate {
                line: name.line,
                col: name.col,
                kind: "automaton",
                name: name.text.to_string(),
            });
        }
        out.push(parse_block(&mut toks, name.text)?);
    }
    if out.is_empty() {
        return Err(toks.syntax("expected at least one `automaton` block"));
    }
    Ok(out)
}

/// Parses a file that must contain exactly one automaton.
pub fn parse_automaton(text: &str) -> Result<Automaton, ParseError> {
    let mut all = parse_automata(text)?;
    if all.len() != 1 {
        return Err(ParseError::Syntax {
            line: 1,
            col: 1,
            message: format!("expected exactly one automaton, found {}", all.len()),
        });
    }
    Ok(all.remove(0))
}

fn parse_block(toks: &mut Tokens<'_>, name: &str) -> Result<Automaton, ParseError> {
    toks.keyword("events")?;
    let n_events = toks.count("events")?;
    let mut alphabet = Alphabet::new();
    for _ in 0..n_events {
        let ev = toks.next("event name")?;
        let c = toks.next("controllability flag")?;
        let o = toks.next("observability flag")?;
        let controllable = match c.text {
            "c" => true,
            "u" => false,
            other => {
                return Err(ParseError::Syntax {
                    line: c.line,
                    col: c.col,
                    message: format!("expected `c` or `u`, found `{other}`"),
                })
            }
        };
        let observable = match o.text {
            "o" => true,
            "n" => false,
            other => {
                return Err(ParseError::Syntax {
                    line: o.line,
                    col: o.col,
                    message: format!("expected `o` or `n`, found `{other}`"),
                })
            }
        };
        alphabet
            .push(ev.text, controllable, observable)
            .map_err(|_| ParseError::Duplicate {
                line: ev.line,
                col: ev.col,
                kind: "event",
                name: ev.text.to_string(),
            })?;
    }

    toks.keyword("states")?;
    let n_states = toks.count("states")?;
    if n_states == 0 {
        return Err(toks.syntax("an automaton needs at least one state"));
    }
    let mut state_tokens = Vec::with_capacity(n_states);
    let mut seen = HashMap::new();
    for _ in 0..n_states {
        let s = toks.next("state name")?;
        if seen.insert(s.text, state_tokens.len()).is_some() {
            return Err(ParseError::Duplicate {
                line: s.line,
                col: s.col,
                kind: "state",
                name: s.text.to_string(),
            });
        }
        state_tokens.push(s);
    }
    let lookup = |t: &Token<'_>| {
        seen.get(t.text).copied().ok_or_else(|| ParseError::Unknown {
            line: t.line,
            col: t.col,
            kind: "state",
            name: t.text.to_string(),
        })
    };

    toks.keyword("initial")?;
    let init_tok = toks.next("initial state")?;
    let initial = lookup(&init_tok)?;

    let mut a = Automaton::new(name, alphabet, state_tokens[0].text);
    for s in &state_tokens[1..] {
        a.add_state(s.text).map_err(|e| match e {
            AutomatonError::DuplicateState(n) | AutomatonError::BadStateName(n) => ParseError::Syntax {
                line: s.line,
                col: s.col,
                message: format!("invalid state `{n}`"),
            },
            AutomatonError::Nondeterministic { .. } => unreachable!(),
        })?;
    }
    a.set_initial(initial);

    toks.keyword("marked")?;
    let k = toks.count("marked")?;
    for _ in 0..k {
        let m = toks.next("marked state")?;
        let id = lookup(&m)?;
        a.set_marked(id, true);
    }

    toks.keyword("trans")?;
    let m = toks.count("trans")?;
    for _ in 0..m {
        let src_tok = toks.next("transition source")?;
        let ev_tok = toks.next("transition event")?;
        let dst_tok = toks.next("transition target")?;
        let src = lookup(&src_tok)?;
        let ev = a.alphabet().id(ev_tok.text).ok_or_else(|| ParseError::Unknown {
            line: ev_tok.line,
            col: ev_tok.col,
            kind: "event",
            name: ev_tok.text.to_string(),
        })?;
        let dst = lookup(&dst_tok)?;
        a.add_transition(src, ev, dst)
            .map_err(|_| ParseError::Nondeterministic {
                line: src_tok.line,
                col: src_tok.col,
                state: src_tok.text.to_string(),
                event: ev_tok.text.to_string(),
            })?;
    }
    toks.keyword("end")?;
    Ok(a)
}

const STATES_PER_LINE: usize = 10;

/// Canonical text of one automaton block.
pub fn serialize_automaton(a: &Automaton) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "automaton {}", a.name());
    let _ = writeln!(out, "events {}", a.alphabet().len());
    for e in a.alphabet().events() {
        let _ = writeln!(
            out,
            "{} {} {}",
            e.name,
            if e.controllable { 'c' } else { 'u' },
            if e.observable { 'o' } else { 'n' }
        );
    }
    let _ = writeln!(out, "states {}", a.num_states());
    for chunk in a.state_names().chunks(STATES_PER_LINE) {
        let _ = writeln!(out, "{}", chunk.join(" "));
    }
    let _ = writeln!(out, "initial {}", a.state_name(a.initial()));
    let marked: Vec<&str> = a.marked_states().map(|s| a.state_name(s)).collect();
    if marked.is_empty() {
        let _ = writeln!(out, "marked 0");
    } else {
        let _ = writeln!(out, "marked {} {}", marked.len(), marked.join(" "));
    }
    let _ = writeln!(out, "trans {}", a.num_transitions());
    for (s, e, t) in a.transitions() {
        let _ = writeln!(out, "{} {} {}", a.state_name(s), a.alphabet().name(e), a.state_name(t));
    }
    out.push_str("end\n");
    out
}

/// Canonical text of several automata, blocks separated by a blank line.
pub fn serialize_automata<'a>(all: impl IntoIterator<Item = &'a Automaton>) -> String {
    all.into_iter().map(serialize_automaton).collect::<Vec<_>>().join("\n")
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "automaton one\nevents 1\na c o\nstates 1\nq\ninitial q\nmarked 0\ntrans 0\nend\n";

    #[test]
    fn minimal_automaton() {
        let a = parse_automaton(MINIMAL).unwrap();
        assert_eq!(a.num_states(), 1);
        assert_eq!(a.num_transitions(), 0);
        assert_eq!(serialize_automaton(&a), MINIMAL);
    }

    #[test]
    fn empty_marked_line_is_emitted() {
        let a = parse_automaton(MINIMAL).unwrap();
        assert!(serialize_automaton(&a).contains("\nmarked 0\n"));
    }

    #[test]
    fn nondeterminism_is_reported() {
        let text = "automaton n\nevents 1\na c o\nstates 3 q r s\ninitial q\nmarked 0\ntrans 2\nq a r\nq a s\nend\n";
        let err = parse_automata(text).unwrap_err();
        assert!(err.is_nondeterminism(), "{err}");
        assert!(matches!(err, ParseError::Nondeterministic { line: 9, col: 1, .. }));
    }

    #[test]
    fn unknown_names_and_duplicates() {
        let unknown_state = "automaton n\nevents 1\na c o\nstates 1 q\ninitial q\nmarked 0\ntrans 1\nq a r\nend\n";
        assert!(matches!(
            parse_automata(unknown_state),
            Err(ParseError::Unknown {
                kind: "state",
                line: 8,
                col: 5,
                ..
            })
        ));
        let unknown_event = "automaton n\nevents 1\na c o\nstates 1 q\ninitial q\nmarked 0\ntrans 1\nq b q\nend\n";
        assert!(matches!(
            parse_automata(unknown_event),
            Err(ParseError::Unknown { kind: "event", .. })
        ));
        let dup_event = "automaton n\nevents 2\na c o\na u o\nstates 1 q\ninitial q\nmarked 0\ntrans 0\nend\n";
        assert!(matches!(
            parse_automata(dup_event),
            Err(ParseError::Duplicate {
                kind: "event",
                line: 4,
                ..
            })
        ));
        let dup_state = "automaton n\nevents 0\nstates 2 q q\ninitial q\nmarked 0\ntrans 0\nend\n";
        assert!(matches!(
            parse_automata(dup_state),
            Err(ParseError::Duplicate { kind: "state", .. })
        ));
    }

    #[test]
    fn syntax_errors_carry_position() {
        let bad_flag = "automaton n\nevents 1\na x o\nstates 1 q\ninitial q\nmarked 0\ntrans 0\nend\n";
        assert!(matches!(
            parse_automata(bad_flag),
            Err(ParseError::Syntax { line: 3, col: 3, .. })
        ));
        let no_states = "automaton n\nevents 0\nstates 0\ninitial q\nmarked 0\ntrans 0\nend\n";
        assert!(matches!(parse_automata(no_states), Err(ParseError::Syntax { .. })));
        let truncated = "automaton n\nevents 0\nstates 1 q\n";
        assert!(matches!(parse_automata(truncated), Err(ParseError::Syntax { .. })));
        assert!(parse_automata("# nothing here\n").is_err());
    }

    #[test]
    fn comments_and_multiple_blocks() {
        let text = "# two machines\nautomaton A # first\nevents 1\na c o\nstates 2\np\nq\ninitial p\nmarked 1 q\ntrans 1\np a q\nend\n\nautomaton B\nevents 1\na c o\nstates 1 r\ninitial r\nmarked 0\ntrans 0\nend\n";
        let all = parse_automata(text).unwrap();
        assert_eq!(all.len(), 2);
        assert_eq!(all[0].name(), "A");
        assert!(all[0].is_marked(1));
        let dup = format!("{text}\n{}", serialize_automaton(&all[1]));
        assert!(matches!(
            parse_automata(&dup),
            Err(ParseError::Duplicate { kind: "automaton", .. })
        ));
    }
}
