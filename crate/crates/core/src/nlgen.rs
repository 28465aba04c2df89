//! Template-based English rendering of label-sets.
//!
//! Rendering is a pure function of the label-set and a [`Lexicon`]; the
//! ontology is never consulted.

use crate::expr::{ConceptExpr, RoleExpr};
use crate::labelset::LabelSet;
use serde::Serialize;
use std::collections::BTreeMap;
use thiserror::Error;

const DEFAULT_VERB: &str = "related to";

const VERBS: &[&str] = &[
    "has",
    "owns",
    "teaches",
    "enrolled",
    "related",
    "contains",
    "uses",
    "likes",
    "knows",
    "supervises",
    "works",
    "studies",
    "lives",
    "eats",
    "drives",
    "advises",
    "attends",
    "holds",
    "includes",
    "produces",
    "wrote",
    "writes",
    "reads",
    "manages",
    "employs",
    "visits",
    "loves",
    "hates",
    "buys",
    "sells",
    "member",
];

const COPULAS: &[&str] = &["is", "are", "was", "be"];

const PREPOSITIONS: &[&str] = &[
    "in", "of", "to", "at", "on", "by", "for", "with", "from", "into", "under", "over", "about",
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RoleLexEntry {
    pub role: String,
    pub verb: String,
    pub noun: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("lexicon line {line}: {message}")]
pub struct LexiconError {
    pub line: usize,
    pub message: String,
}

/// Overrides for role verbalization and display labels for concept names.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Lexicon {
    pub roles: BTreeMap<String, RoleLexEntry>,
    pub labels: BTreeMap<String, String>,
    pub extra_verbs: Vec<String>,
}

impl Lexicon {
    /// Parses `role = verb | noun` lines. A line without `|` gives a concept
    /// display label (`Name = label`); `verb: word` extends the verb list.
    /// Blank lines and `#` comments are skipped.
    pub fn parse(src: &str) -> Result<Self, LexiconError> {
        let mut lex = Lexicon::default();
        for (i, raw) in src.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: &str| LexiconError {
                line: i + 1,
                message: message.to_string(),
            };
            if let Some(word) = line.strip_prefix("verb:") {
                let word = word.trim();
                if word.is_empty() {
                    return Err(err("empty verb"));
                }
                lex.extra_verbs.push(word.to_lowercase());
                continue;
            }
            let (name, rest) = line.split_once('=').ok_or_else(|| err("expected `=`"))?;
            let name = name.trim();
            if name.is_empty() {
                return Err(err("missing name"));
            }
            match rest.split_once('|') {
                Some((verb, noun)) => {
                    let verb = verb.trim();
                    lex.roles.insert(
                        name.to_string(),
                        RoleLexEntry {
                            role: name.to_string(),
                            verb: if verb.is_empty() {
                                DEFAULT_VERB.to_string()
                            } else {
                                verb.to_string()
                            },
                            noun: noun.trim().to_string(),
                        },
                    );
                }
                None => {
                    lex.labels.insert(name.to_string(), rest.trim().to_string());
                }
            }
        }
        Ok(lex)
    }

    fn is_verb(&self, w: &str) -> bool {
        VERBS.contains(&w) || self.extra_verbs.iter().any(|v| v == w)
    }
}

/// Splits an identifier into words: camel-case humps, underscores, spaces,
/// punctuation and digit runs. All-caps words longer than one letter are
/// kept as acronyms; everything else is lowercased.
pub fn split_words(name: &str) -> Vec<String> {
    let chars: Vec<char> = name.chars().collect();
    let mut words: Vec<String> = Vec::new();
    let mut cur = String::new();
    for (i, &ch) in chars.iter().enumerate() {
        if !ch.is_alphanumeric() {
            if !cur.is_empty() {
                words.push(std::mem::take(&mut cur));
            }
            continue;
        }
        if let Some(&prev) = cur.chars().last().as_ref() {
            let next = chars.get(i + 1).copied();
            let boundary = (prev.is_lowercase() && ch.is_uppercase())
                || (prev.is_uppercase() && ch.is_uppercase() && next.is_some_and(char::is_lowercase))
                || (prev.is_ascii_digit() != ch.is_ascii_digit());
            if boundary {
                words.push(std::mem::take(&mut cur));
            }
        }
        cur.push(ch);
    }
    if !cur.is_empty() {
        words.push(cur);
    }
    words
        .into_iter()
        .map(|w| {
            if w.chars().count() > 1 && w.chars().all(|c| c.is_uppercase() || c.is_ascii_digit()) {
                w
            } else {
                w.to_lowercase()
            }
        })
        .collect()
}

/// Verb and noun for a role. An explicit lexicon entry wins.
pub fn tokenize_role(role: &str, lexicon: &Lexicon) -> RoleLexEntry {
    if let Some(e) = lexicon.roles.get(role) {
        return e.clone();
    }
    let words = split_words(role);
    let mut rest: &[String] = &words;
    let mut verb = None;
    if let Some((first, tail)) = rest.split_first() {
        let lower = first.to_lowercase();
        if COPULAS.contains(&lower.as_str()) {
            rest = tail;
        } else if lexicon.is_verb(&lower) {
            verb = Some(lower);
            rest = tail;
        }
    }
    let is_prep = |w: &String| PREPOSITIONS.contains(&w.to_lowercase().as_str());
    match verb {
        // "enrolledIn": the trailing particle belongs to the verb.
        Some(v) if !rest.is_empty() && rest.iter().all(is_prep) => RoleLexEntry {
            role: role.to_string(),
            verb: format!("{} {}", v, rest.join(" ")),
            noun: String::new(),
        },
        Some(v) => RoleLexEntry {
            role: role.to_string(),
            verb: v,
            noun: rest.join(" "),
        },
        None => {
            let mut noun: Vec<String> = rest.to_vec();
            while noun.len() > 1 && noun.last().is_some_and(is_prep) {
                noun.pop();
            }
            RoleLexEntry {
                role: role.to_string(),
                verb: DEFAULT_VERB.to_string(),
                noun: noun.join(" "),
            }
        }
    }
}

fn role_words(r: &RoleExpr, lexicon: &Lexicon) -> (String, String) {
    let e = tokenize_role(&r.name, lexicon);
    if !r.inverted {
        return (e.verb, e.noun);
    }
    let what = if e.noun.is_empty() {
        split_words(&r.name).join(" ")
    } else {
        e.noun
    };
    (format!("is {} of", what), String::new())
}

fn class_name(name: &str, lexicon: &Lexicon) -> String {
    lexicon
        .labels
        .get(name)
        .cloned()
        .unwrap_or_else(|| split_words(name).join(" "))
}

/// Class name with its indefinite article. Judged by the first letter only.
fn with_article(name: &str, lexicon: &Lexicon) -> String {
    let noun = class_name(name, lexicon);
    let article = match noun.chars().next() {
        Some(c) if "aeiouAEIOU".contains(c) => "an",
        _ => "a",
    };
    format!("{article} {noun}")
}

/// Noun phrase for a filler.
fn filler(c: &ConceptExpr, lexicon: &Lexicon) -> String {
    match c {
        ConceptExpr::Atomic(a) => class_name(a, lexicon),
        ConceptExpr::Top => "thing".to_string(),
        ConceptExpr::Bottom => "nothing".to_string(),
        ConceptExpr::Not(x) => format!("not {}", filler(x, lexicon)),
        ConceptExpr::And(ops) => ordered(ops)
            .iter()
            .map(|o| filler(o, lexicon))
            .collect::<Vec<_>>()
            .join(" and "),
        ConceptExpr::Or(ops) => ordered(ops)
            .iter()
            .map(|o| filler(o, lexicon))
            .collect::<Vec<_>>()
            .join(" or "),
        other => format!("something that {}", render_restriction(other, lexicon)),
    }
}

/// Named operands before compound ones, canonical order within each group.
fn ordered(ops: &[ConceptExpr]) -> Vec<&ConceptExpr> {
    let (mut named, rest): (Vec<&ConceptExpr>, Vec<&ConceptExpr>) = ops.iter().partition(|o| o.as_atomic().is_some());
    named.extend(rest);
    named
}

fn spell(n: u32) -> String {
    if n == 1 {
        "one".to_string()
    } else {
        n.to_string()
    }
}

fn with_noun(body: String, noun: &str) -> String {
    if noun.is_empty() {
        body
    } else {
        format!("{} as {}", body, noun)
    }
}

/// Phrase for one restriction, or for a bare filler when `expr` is not one.
pub fn render_restriction(expr: &ConceptExpr, lexicon: &Lexicon) -> String {
    let (role, inner) = match expr.restriction_parts() {
        Some(p) => p,
        None => return filler(expr, lexicon),
    };
    let (verb, noun) = role_words(role, lexicon);
    let c = filler(inner, lexicon);
    let body = match expr {
        ConceptExpr::Exists(..) => format!("{} at least one {}", verb, c),
        ConceptExpr::ForAll(..) => format!("{} only {}", verb, c),
        ConceptExpr::AtLeast(n, ..) => format!("{} at least {} {}", verb, n, c),
        ConceptExpr::AtMost(n, ..) => format!("{} at most {} {}", verb, n, c),
        ConceptExpr::NonVacuous(..) => format!("{} at least one {} and only {}", verb, c, c),
        ConceptExpr::Exactly(n, ..) => format!("{} exactly {} {}", verb, spell(*n), c),
        _ => unreachable!("restriction_parts only matches restrictions"),
    };
    with_noun(body, &noun)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Description {
    pub subject: String,
    pub class_phrases: Vec<String>,
    pub restriction_phrases: Vec<String>,
    pub sentence: String,
}

fn join_list(items: &[String]) -> String {
    match items {
        [] => String::new(),
        [one] => one.clone(),
        [a, b] => format!("{} and {}", a, b),
        [init @ .., last] => format!("{}, and {}", init.join(", "), last),
    }
}

fn sort_key(c: &ConceptExpr) -> (String, String) {
    let role = c.restriction_parts().map(|(r, _)| r.name.clone()).unwrap_or_default();
    (role, c.canonical())
}

fn d_clause_phrase(d: &ConceptExpr, lexicon: &Lexicon) -> String {
    let ops: Vec<&ConceptExpr> = match d {
        ConceptExpr::Or(ops) => ordered(ops),
        other => vec![other],
    };
    let parts: Vec<String> = ops
        .into_iter()
        .map(|o| match o {
            ConceptExpr::Atomic(a) => with_article(a, lexicon),
            other if other.is_restriction() => render_restriction(other, lexicon),
            other => filler(other, lexicon),
        })
        .collect();
    format!("is {}", parts.join(" or "))
}

/// Sentence for a label-set: concept names first, then restrictions grouped
/// by role, then deferred D-clauses.
pub fn render_description(subject: &str, ls: &LabelSet, lexicon: &Lexicon) -> Description {
    let mut class_phrases = Vec::new();
    let mut restrictions: Vec<&ConceptExpr> = Vec::new();
    for l in &ls.labels {
        match l {
            ConceptExpr::Atomic(a) => class_phrases.push(with_article(a, lexicon)),
            other => restrictions.push(other),
        }
    }
    restrictions.sort_by_key(|c| sort_key(c));
    let mut restriction_phrases: Vec<String> = restrictions.iter().map(|c| render_restriction(c, lexicon)).collect();
    let mut deferred = ls.deferred.clone();
    deferred.sort();
    restriction_phrases.extend(deferred.iter().map(|d| d_clause_phrase(d, lexicon)));

    let all: Vec<String> = class_phrases.iter().chain(&restriction_phrases).cloned().collect();
    let body = if all.is_empty() {
        "is a thing".to_string()
    } else if class_phrases.is_empty() {
        join_list(&all)
    } else {
        format!("is {}", join_list(&all))
    };
    Description {
        subject: subject.to_string(),
        sentence: format!("{}: {}", subject, body),
        class_phrases,
        restriction_phrases,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_canonical;

    fn p(s: &str) -> ConceptExpr {
        parse_canonical(s).unwrap()
    }

    fn lex() -> Lexicon {
        Lexicon::default()
    }

    #[test]
    fn words() {
        assert_eq!(split_words("IITProgramme"), ["IIT", "programme"]);
        assert_eq!(split_words("TeachingStaff"), ["teaching", "staff"]);
        assert_eq!(split_words("IIT_MS_Student"), ["IIT", "MS", "student"]);
        assert_eq!(split_words("hasAdvisor"), ["has", "advisor"]);
        assert_eq!(split_words("level2Course"), ["level", "2", "course"]);
        assert_eq!(split_words("A"), ["a"]);
    }

    #[test]
    fn role_tokens() {
        let e = tokenize_role("hasAdvisor", &lex());
        assert_eq!((e.verb.as_str(), e.noun.as_str()), ("has", "advisor"));
        let e = tokenize_role("enrolledIn", &lex());
        assert_eq!((e.verb.as_str(), e.noun.as_str()), ("enrolled in", ""));
        let e = tokenize_role("isPetOf", &lex());
        assert_eq!((e.verb.as_str(), e.noun.as_str()), ("related to", "pet"));
        let e = tokenize_role("friend", &lex());
        assert_eq!((e.verb.as_str(), e.noun.as_str()), ("related to", "friend"));
    }

    #[test]
    fn lexicon_overrides() {
        let l = Lexicon::parse("# roles\nisPetOf = belongs to | owner\nIITProgramme = IIT programme\nverb: guards\n")
            .unwrap();
        let e = tokenize_role("isPetOf", &l);
        assert_eq!((e.verb.as_str(), e.noun.as_str()), ("belongs to", "owner"));
        assert_eq!(tokenize_role("guardsGate", &l).verb, "guards");
        assert_eq!(class_name("IITProgramme", &l), "IIT programme");
        assert!(Lexicon::parse("nonsense").is_err());
    }

    #[test]
    fn templates() {
        let l = lex();
        assert_eq!(
            render_restriction(&p("(all hasAdvisor Professor)"), &l),
            "has only professor as advisor"
        );
        assert_eq!(
            render_restriction(&p("(atleast 2 hasAdvisor Professor)"), &l),
            "has at least 2 professor as advisor"
        );
        assert_eq!(
            render_restriction(&p("(atmost 3 hasAdvisor Professor)"), &l),
            "has at most 3 professor as advisor"
        );
        assert_eq!(
            render_restriction(&p("(nonvac hasAdvisor TeachingStaff)"), &l),
            "has at least one teaching staff and only teaching staff as advisor"
        );
        assert_eq!(
            render_restriction(&p("(exactly 1 hasAdvisor Professor)"), &l),
            "has exactly one professor as advisor"
        );
        assert_eq!(
            render_restriction(&p("(exactly 2 hasAdvisor Professor)"), &l),
            "has exactly 2 professor as advisor"
        );
        assert_eq!(
            render_restriction(&p("(atleast 1 hasAdvisor (and TeachingStaff (not Professor)))"), &l),
            "has at least 1 teaching staff and not professor as advisor"
        );
        assert_eq!(
            render_restriction(&p("(some enrolledIn IITProgramme)"), &l),
            "enrolled in at least one IIT programme"
        );
        assert_eq!(
            render_restriction(&p("(some (inv hasAdvisor) Student)"), &l),
            "is advisor of at least one student"
        );
    }

    #[test]
    fn single_class() {
        let ls = LabelSet::from_labels("bob", [p("Professor")]);
        assert_eq!(render_description("bob", &ls, &lex()).sentence, "bob: is a professor");
    }

    #[test]
    fn list_joining() {
        let ls = LabelSet::from_labels(
            "x",
            [
                p("Student"),
                p("(some enrolledIn IITProgramme)"),
                p("(exactly 1 hasAdvisor Professor)"),
            ],
        );
        let d = render_description("x", &ls, &lex());
        assert_eq!(
            d.sentence,
            "x: is a student, enrolled in at least one IIT programme, and has exactly one professor as advisor"
        );
        assert_eq!(d.class_phrases.len() + d.restriction_phrases.len(), 3);
    }

    #[test]
    fn deferred_clauses_render_with_or() {
        let mut ls = LabelSet::from_labels("x", [p("(some enrolledIn IITProgramme)")]);
        ls.insert(p("(or IITPhdStudent IIT_MS_Student)"));
        let d = render_description("x", &ls, &lex());
        assert_eq!(
            d.sentence,
            "x: enrolled in at least one IIT programme and is an IIT phd student or an IIT MS student"
        );
    }

    #[test]
    fn empty_set() {
        assert_eq!(
            render_description("x", &LabelSet::new("x"), &lex()).sentence,
            "x: is a thing"
        );
    }

    #[test]
    fn article_follows_first_letter() {
        let ls = LabelSet::from_labels(
            "alice",
            [ConceptExpr::atomic("AssistantProf"), ConceptExpr::atomic("Human")],
        );
        assert_eq!(
            render_description("alice", &ls, &lex()).sentence,
            "alice: is an assistant prof and a human"
        );
    }
}
