//! The text bundle format.
//!
//! ```text
//! # comments run to the end of the line
//! complex X { vertices: a b c; simplices: (a b c) (c d); }
//! set U on X { (a b) (c) }
//! set K on X closed { (a b c) }
//! map f on X { a -> b; b -> a; c -> c; }
//! map g on X depth 1 { <a> -> a; ... }
//! function h on X { 2 U; -1 K; }
//! scenario s on X { symmetry: f; supports: U K; truth: 2; }
//! ```
//!
//! Commas are whitespace. Names are runs of any other non-space characters
//! except `{ } ( ) ; : #`, so subdivision vertices such as `<a+b>` and product
//! vertices such as `a|x` can be written directly.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::path::Path;
use std::sync::Arc;

use lefint::complex::{OpenSet, Simplex, SimplicialComplex};
use lefint::counting::Scenario;
use lefint::integral::ConstructibleFunction;
use lefint::lefschetz::SelfMap;
use lefint::subdivision::iterated_subdivision;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorClass {
    Syntax,
    UnknownReference,
    Validation,
    Io,
}

impl fmt::Display for ErrorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ErrorClass::Syntax => "syntax error",
            ErrorClass::UnknownReference => "unknown reference",
            ErrorClass::Validation => "validation error",
            ErrorClass::Io => "io error",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormatError {
    pub class: ErrorClass,
    pub file: String,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for FormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.class == ErrorClass::Io {
            write!(f, "{}: {}: {}", self.file, self.class, self.message)
        } else {
            write!(f, "{}:{}:{}: {}: {}", self.file, self.line, self.column, self.class, self.message)
        }
    }
}

impl std::error::Error for FormatError {}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Word(String),
    Open,
    Close,
    LParen,
    RParen,
    Semi,
    Colon,
    Arrow,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Word(w) => write!(f, "`{w}`"),
            Tok::Open => f.write_str("`{`"),
            Tok::Close => f.write_str("`}`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Semi => f.write_str("`;`"),
            Tok::Colon => f.write_str("`:`"),
            Tok::Arrow => f.write_str("`->`"),
        }
    }
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn is_word_char(c: char) -> bool {
    !c.is_whitespace() && !matches!(c, '{' | '}' | '(' | ')' | ';' | ':' | '#' | ',')
}

fn lex(src: &str, file: &str) -> Result<Vec<Token>, FormatError> {
    let mut out = Vec::new();
    for (ln, text) in src.lines().enumerate() {
        let chars: Vec<char> = text.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let column = i + 1;
            let line = ln + 1;
            let single = match c {
                '{' => Some(Tok::Open),
                '}' => Some(Tok::Close),
                '(' => Some(Tok::LParen),
                ')' => Some(Tok::RParen),
                ';' => Some(Tok::Semi),
                ':' => Some(Tok::Colon),
                _ => None,
            };
            if let Some(tok) = single {
                out.push(Token { tok, line, column });
                i += 1;
            } else if c == '#' {
                break;
            } else if c.is_whitespace() || c == ',' {
                i += 1;
            } else if c == '-' && chars.get(i + 1) == Some(&'>') {
                out.push(Token { tok: Tok::Arrow, line, column });
                i += 2;
            } else if is_word_char(c) {
                let start = i;
                while i < chars.len() && is_word_char(chars[i]) && !(chars[i] == '-' && chars.get(i + 1) == Some(&'>')) {
                    i += 1;
                }
                out.push(Token { tok: Tok::Word(chars[start..i].iter().collect()), line, column });
            } else {
                return Err(FormatError {
                    class: ErrorClass::Syntax,
                    file: file.into(),
                    line,
                    column,
                    message: format!("unexpected character `{c}`"),
                });
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct NamedSet {
    pub host: String,
    pub set: OpenSet,
}

#[derive(Clone, Debug)]
pub struct NamedMap {
    pub host: String,
    pub map: SelfMap,
}

#[derive(Clone, Debug)]
pub struct NamedFunction {
    pub host: String,
    pub terms: Vec<(i64, String)>,
    pub function: ConstructibleFunction,
}

#[derive(Clone, Debug)]
pub struct NamedScenario {
    pub host: String,
    pub symmetry: String,
    pub supports: Vec<String>,
    pub truth: Option<usize>,
    pub scenario: Scenario,
}

/// Every named object loaded from one or more files, validated.
#[derive(Clone, Debug, Default)]
pub struct Bundle {
    pub complexes: BTreeMap<String, Arc<SimplicialComplex>>,
    pub sets: BTreeMap<String, NamedSet>,
    pub maps: BTreeMap<String, NamedMap>,
    pub functions: BTreeMap<String, NamedFunction>,
    pub scenarios: BTreeMap<String, NamedScenario>,
}

struct Parser<'a> {
    file: &'a str,
    toks: Vec<Token>,
    pos: usize,
    bundle: &'a mut Bundle,
}

type PResult<T> = Result<T, FormatError>;

impl Parser<'_> {
    fn err_at(&self, class: ErrorClass, at: &Token, message: String) -> FormatError {
        FormatError { class, file: self.file.into(), line: at.line, column: at.column, message }
    }

    fn here(&self) -> Token {
        self.toks.get(self.pos).cloned().unwrap_or_else(|| {
            let (line, column) = self.toks.last().map_or((1, 1), |t| (t.line, t.column + 1));
            Token { tok: Tok::Semi, line, column }
        })
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn syntax(&self, expected: &str) -> FormatError {
        let t = self.here();
        let found = if self.at_end() { "end of input".to_string() } else { t.tok.to_string() };
        self.err_at(ErrorClass::Syntax, &t, format!("expected {expected}, found {found}"))
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn eat(&mut self, tok: Tok) -> PResult<Token> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(self.toks[self.pos - 1].clone())
        } else {
            Err(self.syntax(&tok.to_string()))
        }
    }

    fn word(&mut self, what: &str) -> PResult<(String, Token)> {
        match self.peek() {
            Some(Tok::Word(w)) => {
                let w = w.clone();
                self.pos += 1;
                Ok((w, self.toks[self.pos - 1].clone()))
            }
            _ => Err(self.syntax(what)),
        }
    }

    fn keyword(&mut self, kw: &str) -> PResult<Token> {
        let (w, t) = self.word(&format!("`{kw}`"))?;
        if w == kw {
            Ok(t)
        } else {
            self.pos -= 1;
            Err(self.syntax(&format!("`{kw}`")))
        }
    }

    fn integer<T: std::str::FromStr>(&mut self, what: &str) -> PResult<(T, Token)> {
        let (w, t) = self.word(what)?;
        w.parse().map(|v| (v, t.clone())).map_err(|_| {
            self.err_at(ErrorClass::Syntax, &t, format!("expected {what}, found `{w}`"))
        })
    }

    fn fresh_name<V>(&self, map: &BTreeMap<String, V>, kind: &str, name: &str, at: &Token) -> PResult<()> {
        if map.contains_key(name) {
            Err(self.err_at(ErrorClass::Validation, at, format!("{kind} `{name}` declared twice")))
        } else {
            Ok(())
        }
    }

    fn complex_ref(&mut self) -> PResult<(String, Arc<SimplicialComplex>)> {
        self.keyword("on")?;
        let (name, t) = self.word("a complex name")?;
        match self.bundle.complexes.get(&name) {
            Some(x) => Ok((name, x.clone())),
            None => Err(self.err_at(ErrorClass::UnknownReference, &t, format!("complex `{name}`"))),
        }
    }

    /// `( v ... )` resolved against `x`; the simplex need not be in `x`.
    fn tuple(&mut self, x: &SimplicialComplex) -> PResult<(Vec<usize>, Token)> {
        let open = self.eat(Tok::LParen)?;
        let mut verts = Vec::new();
        while self.peek() != Some(&Tok::RParen) {
            let (name, t) = self.word("a vertex name or `)`")?;
            let v = x
                .vertex_index(&name)
                .ok_or_else(|| self.err_at(ErrorClass::UnknownReference, &t, format!("vertex `{name}`")))?;
            if verts.contains(&v) {
                return Err(self.err_at(ErrorClass::Validation, &t, format!("vertex `{name}` appears twice in one simplex")));
            }
            verts.push(v);
        }
        self.eat(Tok::RParen)?;
        if verts.is_empty() {
            return Err(self.err_at(ErrorClass::Validation, &open, "empty simplex".into()));
        }
        Ok((verts, open))
    }

    fn item(&mut self) -> PResult<()> {
        let (kw, t) = self.word("`complex`, `set`, `map`, `function` or `scenario`")?;
        match kw.as_str() {
            "complex" => self.complex(),
            "set" => self.set(),
            "map" => self.map(),
            "function" => self.function(),
            "scenario" => self.scenario(),
            _ => {
                self.pos -= 1;
                Err(self.err_at(
                    ErrorClass::Syntax,
                    &t,
                    format!("expected `complex`, `set`, `map`, `function` or `scenario`, found `{kw}`"),
                ))
            }
        }
    }

    fn complex(&mut self) -> PResult<()> {
        let (name, at) = self.word("a complex name")?;
        self.fresh_name(&self.bundle.complexes, "complex", &name, &at)?;
        self.eat(Tok::Open)?;
        self.keyword("vertices")?;
        self.eat(Tok::Colon)?;
        let mut names: Vec<String> = Vec::new();
        while let Some(Tok::Word(_)) = self.peek() {
            let (v, t) = self.word("a vertex name")?;
            if names.contains(&v) {
                return Err(self.err_at(ErrorClass::Validation, &t, format!("vertex `{v}` declared twice")));
            }
            names.push(v);
        }
        self.eat(Tok::Semi)?;
        let mut tuples = Vec::new();
        if self.peek() == Some(&Tok::Word("simplices".into())) {
            self.keyword("simplices")?;
            self.eat(Tok::Colon)?;
            let vertices_only = SimplicialComplex::new(names.clone(), &[]).expect("distinct names");
            while self.peek() == Some(&Tok::LParen) {
                tuples.push(self.tuple(&vertices_only)?.0);
            }
            self.eat(Tok::Semi)?;
        }
        self.eat(Tok::Close)?;
        let x = SimplicialComplex::new(names, &tuples)
            .map_err(|e| self.err_at(ErrorClass::Validation, &at, e.to_string()))?;
        self.bundle.complexes.insert(name, Arc::new(x));
        Ok(())
    }

    fn set(&mut self) -> PResult<()> {
        let (name, at) = self.word("a set name")?;
        self.fresh_name(&self.bundle.sets, "set", &name, &at)?;
        let (host, x) = self.complex_ref()?;
        let closed = if self.peek() == Some(&Tok::Word("closed".into())) {
            self.pos += 1;
            true
        } else {
            false
        };
        self.eat(Tok::Open)?;
        let mut cells = Vec::new();
        while self.peek() == Some(&Tok::LParen) {
            let (verts, t) = self.tuple(&x)?;
            let s = Simplex::new(verts).expect("validated tuple");
            let id = x.id_of(&s).ok_or_else(|| {
                self.err_at(ErrorClass::Validation, &t, format!("{} is not a simplex of `{host}`", x.format_simplex(&s)))
            })?;
            cells.push(id);
        }
        self.eat(Tok::Close)?;
        let set = OpenSet::new(x.clone(), cells).expect("cells of host");
        let set = if closed { set.closure() } else { set };
        self.bundle.sets.insert(name, NamedSet { host, set });
        Ok(())
    }

    fn map(&mut self) -> PResult<()> {
        let (name, at) = self.word("a map name")?;
        self.fresh_name(&self.bundle.maps, "map", &name, &at)?;
        let (host, x) = self.complex_ref()?;
        let depth = if self.peek() == Some(&Tok::Word("depth".into())) {
            self.pos += 1;
            let (d, t) = self.integer::<usize>("a subdivision depth")?;
            if d > 3 {
                return Err(self.err_at(ErrorClass::Validation, &t, "subdivision depth is limited to 3".into()));
            }
            d
        } else {
            0
        };
        let rec = iterated_subdivision(&x, depth);
        let source = rec.refined().clone();
        let open = self.eat(Tok::Open)?;
        let mut assignment: Vec<Option<usize>> = vec![None; source.num_vertices()];
        while self.peek() != Some(&Tok::Close) {
            let (from, tf) = self.word("a vertex name or `}`")?;
            self.eat(Tok::Arrow)?;
            let (to, tt) = self.word("a vertex name")?;
            self.eat(Tok::Semi)?;
            let v = source
                .vertex_index(&from)
                .ok_or_else(|| self.err_at(ErrorClass::UnknownReference, &tf, format!("vertex `{from}`")))?;
            let w = x
                .vertex_index(&to)
                .ok_or_else(|| self.err_at(ErrorClass::UnknownReference, &tt, format!("vertex `{to}`")))?;
            if assignment[v].replace(w).is_some() {
                return Err(self.err_at(ErrorClass::Validation, &tf, format!("vertex `{from}` assigned twice")));
            }
        }
        self.eat(Tok::Close)?;
        if let Some(v) = assignment.iter().position(Option::is_none) {
            return Err(self.err_at(
                ErrorClass::Validation,
                &open,
                format!("map `{name}` does not assign vertex `{}`", source.vertex_name(v)),
            ));
        }
        let assignment = assignment.into_iter().map(Option::unwrap).collect();
        let map = if depth == 0 {
            SelfMap::new(x.clone(), assignment)
        } else {
            SelfMap::on_subdivision(rec, assignment)
        }
        .map_err(|e| self.err_at(ErrorClass::Validation, &at, e.to_string()))?;
        self.bundle.maps.insert(name, NamedMap { host, map });
        Ok(())
    }

    fn set_ref(&mut self, host: &str) -> PResult<(String, OpenSet)> {
        let (name, t) = self.word("a set name")?;
        let s = self
            .bundle
            .sets
            .get(&name)
            .ok_or_else(|| self.err_at(ErrorClass::UnknownReference, &t, format!("set `{name}`")))?;
        if s.host != host {
            return Err(self.err_at(
                ErrorClass::Validation,
                &t,
                format!("set `{name}` lives on `{}`, not `{host}`", s.host),
            ));
        }
        Ok((name, s.set.clone()))
    }

    fn function(&mut self) -> PResult<()> {
        let (name, at) = self.word("a function name")?;
        self.fresh_name(&self.bundle.functions, "function", &name, &at)?;
        let (host, x) = self.complex_ref()?;
        self.eat(Tok::Open)?;
        let mut terms = Vec::new();
        let mut presentation = Vec::new();
        while self.peek() != Some(&Tok::Close) {
            let (c, _) = self.integer::<i64>("an integer coefficient or `}`")?;
            let (set_name, set) = self.set_ref(&host)?;
            self.eat(Tok::Semi)?;
            terms.push((c, set_name));
            presentation.push((c, set));
        }
        self.eat(Tok::Close)?;
        let function = ConstructibleFunction::normalize(x, presentation)
            .map_err(|e| self.err_at(ErrorClass::Validation, &at, e.to_string()))?;
        self.bundle.functions.insert(name, NamedFunction { host, terms, function });
        Ok(())
    }

    fn scenario(&mut self) -> PResult<()> {
        let (name, at) = self.word("a scenario name")?;
        self.fresh_name(&self.bundle.scenarios, "scenario", &name, &at)?;
        let (host, _) = self.complex_ref()?;
        self.eat(Tok::Open)?;
        self.keyword("symmetry")?;
        self.eat(Tok::Colon)?;
        let (symmetry, ts) = self.word("a map name")?;
        let map = self
            .bundle
            .maps
            .get(&symmetry)
            .ok_or_else(|| self.err_at(ErrorClass::UnknownReference, &ts, format!("map `{symmetry}`")))?;
        if map.host != host {
            return Err(self.err_at(ErrorClass::Validation, &ts, format!("map `{symmetry}` lives on `{}`", map.host)));
        }
        let map = map.map.clone();
        self.eat(Tok::Semi)?;
        self.keyword("supports")?;
        self.eat(Tok::Colon)?;
        let mut supports = Vec::new();
        let mut sets = Vec::new();
        while let Some(Tok::Word(_)) = self.peek() {
            let (n, s) = self.set_ref(&host)?;
            supports.push(n);
            sets.push(s);
        }
        self.eat(Tok::Semi)?;
        let truth = if self.peek() == Some(&Tok::Word("truth".into())) {
            self.pos += 1;
            self.eat(Tok::Colon)?;
            let (t, _) = self.integer::<usize>("a target count")?;
            self.eat(Tok::Semi)?;
            Some(t)
        } else {
            None
        };
        self.eat(Tok::Close)?;
        if map.depth() != 0 {
            return Err(self.err_at(ErrorClass::Validation, &ts, format!("symmetry `{symmetry}` must have depth 0")));
        }
        let scenario =
            Scenario::new(map, sets).map_err(|e| self.err_at(ErrorClass::Validation, &at, e.to_string()))?;
        self.bundle.scenarios.insert(name, NamedScenario { host, symmetry, supports, truth, scenario });
        Ok(())
    }
}

impl Bundle {
    /// Parses `src` into this bundle; names from earlier files are visible.
    pub fn parse_str(&mut self, src: &str, file: &str) -> Result<(), FormatError> {
        let toks = lex(src, file)?;
        let mut p = Parser { file, toks, pos: 0, bundle: self };
        while !p.at_end() {
            p.item()?;
        }
        Ok(())
    }

    pub fn parse_files<P: AsRef<Path>>(paths: &[P]) -> Result<Bundle, FormatError> {
        let mut bundle = Bundle::default();
        for path in paths {
            let path = path.as_ref();
            let file = path.display().to_string();
            let src = std::fs::read_to_string(path).map_err(|e| FormatError {
                class: ErrorClass::Io,
                file: file.clone(),
                line: 0,
                column: 0,
                message: e.to_string(),
            })?;
            bundle.parse_str(&src, &file)?;
        }
        Ok(bundle)
    }

    pub fn parse_text(src: &str) -> Result<Bundle, FormatError> {
        let mut bundle = Bundle::default();
        bundle.parse_str(src, "<input>")?;
        Ok(bundle)
    }

    pub fn add_complex(&mut self, name: &str, x: Arc<SimplicialComplex>) {
        self.complexes.insert(name.into(), x);
    }

    pub fn add_set(&mut self, name: &str, host: &str, set: OpenSet) {
        self.sets.insert(name.into(), NamedSet { host: host.into(), set });
    }

    pub fn add_map(&mut self, name: &str, host: &str, map: SelfMap) {
        self.maps.insert(name.into(), NamedMap { host: host.into(), map });
    }

    /// Canonical text: objects grouped by kind, sorted by name.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        for (name, x) in &self.complexes {
            write_complex(&mut out, name, x);
        }
        for (name, s) in &self.sets {
            let cells: Vec<String> = s.set.cells().iter().map(|&c| s.set.host().format_cell(c)).collect();
            let _ = writeln!(out, "set {name} on {} {{ {} }}", s.host, cells.join(" "));
        }
        for (name, m) in &self.maps {
            let source = m.map.subdivision().refined();
            let target = m.map.host();
            let depth = if m.map.depth() == 0 { String::new() } else { format!(" depth {}", m.map.depth()) };
            let _ = writeln!(out, "map {name} on {}{depth} {{", m.host);
            for (v, &w) in m.map.vertex_map().assignment().iter().enumerate() {
                let _ = writeln!(out, "  {} -> {};", source.vertex_name(v), target.vertex_name(w));
            }
            out.push_str("}\n");
        }
        for (name, f) in &self.functions {
            let terms: Vec<String> = f.terms.iter().map(|(c, s)| format!("{c} {s};")).collect();
            let _ = writeln!(out, "function {name} on {} {{ {} }}", f.host, terms.join(" "));
        }
        for (name, s) in &self.scenarios {
            let truth = s.truth.map_or(String::new(), |t| format!(" truth: {t};"));
            let _ = writeln!(
                out,
                "scenario {name} on {} {{ symmetry: {}; supports: {};{truth} }}",
                s.host,
                s.symmetry,
                s.supports.join(" ")
            );
        }
        out
    }
}

fn write_complex(out: &mut String, name: &str, x: &SimplicialComplex) {
    let _ = writeln!(out, "complex {name} {{");
    let _ = writeln!(out, "  vertices: {};", x.vertex_names().join(" "));
    let top: Vec<String> = x
        .maximal_simplices()
        .into_iter()
        .filter(|s| s.dim() > 0)
        .map(|s| {
            let names: Vec<&str> = s.vertices().iter().map(|&v| x.vertex_name(v)).collect();
            format!("({})", names.join(" "))
        })
        .collect();
    if !top.is_empty() {
        let _ = writeln!(out, "  simplices: {};", top.join(" "));
    }
    out.push_str("}\n");
}

/// A single complex in canonical text form.
pub fn complex_to_text(name: &str, x: &SimplicialComplex) -> String {
    let mut out = String::new();
    write_complex(&mut out, name, x);
    out
}
