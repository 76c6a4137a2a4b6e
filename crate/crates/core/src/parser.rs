//! Recursive-descent parser from the math-mode command surface to the AST.

use crate::ast::*;
use crate::config::{BufferChange, EnvConfig, TagsSide};
use crate::dots::{resolve_dots, DotsHint, NeighborContext};
use crate::error::ParseError;
use crate::style::StyleLevel;
use crate::symbols::{is_operator_name, registry, AtomClass, LimitsDefault, Variant};
use crate::token::{tokenize, Token, TokenKind};

/// Parses one math expression; returns the AST together with the
/// configuration commands found in it.
pub fn parse_expression(input: &str) -> Result<(MathList, EnvConfig), ParseError> {
    let tokens = tokenize(input)?;
    let mut parser = Parser {
        input,
        tokens: &tokens,
        pos: 0,
        config: EnvConfig::default(),
        tab_is_align: false,
    };
    let list = parser.parse_list(Stops::top_level())?;
    if let Some(tok) = parser.peek() {
        return Err(match tok.kind {
            TokenKind::EndGroup => ParseError::UnbalancedGroup {
                line: tok.line,
                col: tok.col,
            },
            TokenKind::AlignTab => ParseError::MisplacedAlignTab {
                line: tok.line,
                col: tok.col,
            },
            _ => parser.unknown(tok),
        });
    }
    let list = wrap_top_level_tag(list, &parser.config)?;
    Ok((list, parser.config))
}

/// A bare display with a trailing `\tag` becomes a one-row tagged display.
fn wrap_top_level_tag(list: MathList, _config: &EnvConfig) -> Result<MathList, ParseError> {
    let tag_at = list
        .0
        .iter()
        .position(|n| matches!(n, Node::PendingTag(_)));
    let Some(at) = tag_at else {
        return Ok(list);
    };
    let mut nodes = list.0;
    let rest = nodes.split_off(at + 1);
    let Some(Node::PendingTag(tag)) = nodes.pop() else {
        unreachable!()
    };
    let mut cells_content = nodes;
    cells_content.extend(rest);
    Ok(MathList(vec![Node::DisplayEnv(DisplayEnv {
        kind: DisplayKind::Plain,
        rows: vec![DisplayRow::Eq {
            cells: vec![MathList(cells_content)],
            tag: Some(*tag),
            shove: None,
            break_after: None,
        }],
    })]))
}

/// Where a sub-list stops. The stopping token is left unconsumed.
#[derive(Clone, Copy)]
struct Stops {
    align_tab: bool,
    at_ligature: bool,
    chars: &'static [char],
    words: &'static [&'static str],
}

impl Stops {
    fn top_level() -> Stops {
        Stops {
            align_tab: false,
            at_ligature: false,
            chars: &[],
            words: &[],
        }
    }

    fn group() -> Stops {
        Stops::top_level()
    }

    fn cell(words: &'static [&'static str]) -> Stops {
        Stops {
            align_tab: true,
            words,
            ..Stops::top_level()
        }
    }

    fn until_words(words: &'static [&'static str]) -> Stops {
        Stops {
            words,
            ..Stops::top_level()
        }
    }

    fn until_chars(chars: &'static [char]) -> Stops {
        Stops {
            chars,
            ..Stops::top_level()
        }
    }

    fn cd_cell() -> Stops {
        Stops {
            at_ligature: true,
            words: &["endCD"],
            ..Stops::top_level()
        }
    }
}

const ENV_ENDS: &[&str] = &[
    "endalign",
    "endgather",
    "endalignat",
    "endxalignat",
    "endxxalignat",
    "endsplit",
    "endmultline",
    "endmatrix",
    "endsmallmatrix",
    "endpmatrix",
    "endbmatrix",
    "endvmatrix",
    "endVmatrix",
    "endcases",
    "endaligned",
    "endtopaligned",
    "endbotaligned",
    "endalignedat",
    "endgathered",
    "endCD",
    "endcfrac",
    "endSb",
    "endSp",
];

const ACCENTS: &[&str] = &[
    "hat", "check", "tilde", "acute", "grave", "dot", "ddot", "breve", "bar", "vec", "widehat",
    "widetilde",
];

const EXACT_ACCENTS: &[&str] = &[
    "Hat", "Check", "Tilde", "Acute", "Grave", "Dot", "Ddot", "Breve", "Bar", "Vec",
];

struct Parser<'a> {
    input: &'a str,
    tokens: &'a [Token],
    pos: usize,
    config: EnvConfig,
    tab_is_align: bool,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&'a Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<&'a Token> {
        let t = self.tokens.get(self.pos);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn last_pos(&self) -> (usize, usize) {
        self.tokens
            .last()
            .map(|t| (t.line, t.col + t.text.len()))
            .unwrap_or((1, 1))
    }

    fn unknown(&self, tok: &Token) -> ParseError {
        ParseError::UnknownCommand {
            name: tok.text.clone(),
            line: tok.line,
            col: tok.col,
        }
    }

    fn missing(&self, name: &str) -> ParseError {
        let (line, col) = self
            .peek()
            .map(|t| (t.line, t.col))
            .unwrap_or_else(|| self.last_pos());
        ParseError::MissingArgument {
            name: name.to_string(),
            line,
            col,
        }
    }

    fn stops_here(&self, tok: &Token, stops: Stops) -> bool {
        match tok.kind {
            TokenKind::EndGroup => true, // always a boundary; error if unexpected
            TokenKind::AlignTab => {
                if tok.text == "\t" && !self.tab_is_align {
                    false
                } else {
                    stops.align_tab || true // boundary; misplaced tab error if not allowed
                }
            }
            TokenKind::ControlSymbol if tok.text == "\\" => true,
            TokenKind::ControlWord => {
                stops.words.contains(&tok.text.as_str()) || ENV_ENDS.contains(&tok.text.as_str())
            }
            TokenKind::Char => stops.chars.contains(&tok.text.chars().next().unwrap()),
            TokenKind::AtLigature => stops.at_ligature,
            _ => false,
        }
    }

    /// Parses nodes until a stop token; the stop token is not consumed.
    fn parse_list(&mut self, stops: Stops) -> Result<MathList, ParseError> {
        let mut nodes: Vec<Node> = Vec::new();
        while let Some(tok) = self.peek() {
            if self.stops_here(tok, stops) {
                // Tab that is not active behaves as a space.
                if tok.kind == TokenKind::AlignTab && tok.text == "\t" && !self.tab_is_align {
                    self.pos += 1;
                    continue;
                }
                break;
            }
            if tok.kind == TokenKind::AlignTab && tok.text == "\t" && !self.tab_is_align {
                self.pos += 1;
                continue;
            }
            self.parse_item(&mut nodes)?;
        }
        Ok(MathList(nodes))
    }

    /// Parses one item and any scripts following it, pushing onto `nodes`.
    fn parse_item(&mut self, nodes: &mut Vec<Node>) -> Result<(), ParseError> {
        let node = self.parse_node()?;
        if let Some(node) = node {
            nodes.push(node);
        }
        self.attach_scripts(nodes)?;
        Ok(())
    }

    fn parse_node(&mut self) -> Result<Option<Node>, ParseError> {
        let tok = self.next().expect("caller checked");
        match tok.kind {
            TokenKind::Char => {
                let c = tok.text.chars().next().unwrap();
                if c == '\'' {
                    // a bare prime starts a script on an empty atom
                    self.pos -= 1;
                    return Ok(Some(Node::Atom(Atom::new(
                        AtomClass::Ord,
                        Nucleus::List(MathList::default()),
                    ))));
                }
                Ok(Some(Node::Atom(Atom::new(
                    char_class(c),
                    Nucleus::Char(c),
                ))))
            }
            TokenKind::BeginGroup => {
                let list = self.parse_list(Stops::group())?;
                self.expect_end_group(tok)?;
                Ok(Some(Node::Atom(Atom::new(AtomClass::Ord, Nucleus::List(list)))))
            }
            TokenKind::Superscript | TokenKind::Subscript => {
                // script with no base: attach to an empty atom
                self.pos -= 1;
                Ok(Some(Node::Atom(Atom::new(
                    AtomClass::Ord,
                    Nucleus::List(MathList::default()),
                ))))
            }
            TokenKind::MathShift => Err(ParseError::InvalidCharacter {
                ch: '$',
                line: tok.line,
                col: tok.col,
            }),
            TokenKind::EndGroup => Err(ParseError::UnbalancedGroup {
                line: tok.line,
                col: tok.col,
            }),
            TokenKind::AlignTab => Err(ParseError::MisplacedAlignTab {
                line: tok.line,
                col: tok.col,
            }),
            TokenKind::AtLigature => self.parse_at_ligature(tok).map(Some),
            TokenKind::ControlWord | TokenKind::ControlSymbol => self.parse_command(tok),
        }
    }

    fn expect_end_group(&mut self, open: &Token) -> Result<(), ParseError> {
        match self.next() {
            Some(t) if t.kind == TokenKind::EndGroup => Ok(()),
            _ => Err(ParseError::UnbalancedGroup {
                line: open.line,
                col: open.col,
            }),
        }
    }

    // --- scripts -----------------------------------------------------

    fn attach_scripts(&mut self, nodes: &mut Vec<Node>) -> Result<(), ParseError> {
        loop {
            let Some(tok) = self.peek() else { return Ok(()) };
            let is_sp_deco = tok.kind == TokenKind::ControlWord
                && sp_decoration(&tok.text).is_some();
            match tok.kind {
                TokenKind::Superscript | TokenKind::Subscript => {
                    let is_sup = tok.kind == TokenKind::Superscript;
                    let (line, col) = (tok.line, tok.col);
                    self.pos += 1;
                    let field = self.parse_field("script")?;
                    let slot = self.script_slot(nodes, is_sup, line, col)?;
                    match slot {
                        ScriptSlot::Taken => {
                            return Err(ParseError::DoubleScript { line, col })
                        }
                        ScriptSlot::Set(dest) => *dest = Some(field),
                        ScriptSlot::Append(dest) => dest.0.extend(field.0),
                    }
                }
                TokenKind::Char if tok.text == "'" => {
                    let (line, col) = (tok.line, tok.col);
                    self.pos += 1;
                    let prime = Node::Atom(Atom::new(
                        AtomClass::Ord,
                        Nucleus::Symbol("prime".into()),
                    ));
                    match self.script_slot(nodes, true, line, col)? {
                        ScriptSlot::Taken => {
                            return Err(ParseError::DoubleScript { line, col })
                        }
                        ScriptSlot::Set(dest) => *dest = Some(MathList(vec![prime])),
                        ScriptSlot::Append(dest) => dest.0.push(prime),
                    }
                }
                TokenKind::ControlWord if tok.text == "limits" || tok.text == "nolimits" => {
                    let request = if tok.text == "limits" {
                        LimitsRequest::Limits
                    } else {
                        LimitsRequest::NoLimits
                    };
                    self.pos += 1;
                    match nodes.last_mut() {
                        Some(Node::Atom(a)) => a.limits = request,
                        Some(Node::MultInt(m)) => m.limits = request,
                        _ => {}
                    }
                }
                TokenKind::ControlWord if tok.text == "Sb" || tok.text == "Sp" => {
                    let is_sub = tok.text == "Sb";
                    self.pos += 1;
                    let rows = self.parse_script_rows(if is_sub { "endSb" } else { "endSp" })?;
                    let atom = self.ensure_atom(nodes);
                    if is_sub {
                        atom.multi_sub = Some(rows);
                    } else {
                        atom.multi_sup = Some(rows);
                    }
                }
                TokenKind::ControlWord if is_sp_deco => {
                    let kind = sp_decoration(&tok.text).unwrap();
                    let (line, col) = (tok.line, tok.col);
                    self.pos += 1;
                    let deco = Node::Decoration(Decoration {
                        kind,
                        body: MathList::default(),
                        reference: None,
                    });
                    match self.script_slot(nodes, true, line, col)? {
                        ScriptSlot::Taken => return Err(ParseError::DoubleScript { line, col }),
                        ScriptSlot::Set(dest) => *dest = Some(MathList(vec![deco])),
                        ScriptSlot::Append(dest) => dest.0.push(deco),
                    }
                }
                _ => return Ok(()),
            }
        }
    }

    fn ensure_atom<'n>(&mut self, nodes: &'n mut Vec<Node>) -> &'n mut Atom {
        let needs_wrap = !matches!(nodes.last(), Some(Node::Atom(_)));
        if needs_wrap {
            let nucleus = match nodes.pop() {
                Some(node) => {
                    let class = node_natural_class(&node);
                    let mut a = Atom::new(class, Nucleus::List(MathList(vec![node])));
                    a.limits = LimitsRequest::Auto;
                    a
                }
                None => Atom::new(AtomClass::Ord, Nucleus::List(MathList::default())),
            };
            nodes.push(Node::Atom(nucleus));
        }
        match nodes.last_mut() {
            Some(Node::Atom(a)) => a,
            _ => unreachable!(),
        }
    }

    fn script_slot<'n>(
        &mut self,
        nodes: &'n mut Vec<Node>,
        is_sup: bool,
        _line: usize,
        _col: usize,
    ) -> Result<ScriptSlot<'n>, ParseError> {
        if matches!(nodes.last(), Some(Node::MultInt(_))) {
            let Some(Node::MultInt(m)) = nodes.last_mut() else {
                unreachable!()
            };
            let dest = if is_sup { &mut m.sup } else { &mut m.sub };
            return Ok(if dest.is_some() {
                ScriptSlot::Taken
            } else {
                ScriptSlot::Set(dest)
            });
        }
        let atom = self.ensure_atom(nodes);
        let dest = if is_sup { &mut atom.sup } else { &mut atom.sub };
        Ok(match dest {
            Some(list) if is_sup && ends_with_prime(list) => ScriptSlot::Append(dest.as_mut().unwrap()),
            Some(_) => ScriptSlot::Taken,
            None => ScriptSlot::Set(dest),
        })
    }

    fn parse_script_rows(&mut self, end: &'static str) -> Result<Vec<MathList>, ParseError> {
        let mut rows = Vec::new();
        loop {
            let row = self.parse_list(Stops::cell(&[]))?;
            rows.push(row);
            match self.peek() {
                Some(t) if t.is_control("\\") => {
                    self.pos += 1;
                }
                Some(t) if t.is_control(end) => {
                    self.pos += 1;
                    return Ok(rows);
                }
                Some(t) => {
                    let t = t.clone();
                    return Err(self.env_mismatch(end, &t));
                }
                None => return Err(self.missing(end)),
            }
        }
    }

    fn env_mismatch(&self, expected: &str, got: &Token) -> ParseError {
        ParseError::EnvironmentMismatch {
            opened: expected.trim_start_matches("end").to_string(),
            closed: got.text.clone(),
            line: got.line,
            col: got.col,
        }
    }

    // --- fields and raw captures --------------------------------------

    /// One macro argument: a group or a single item.
    fn parse_field(&mut self, cmd: &str) -> Result<MathList, ParseError> {
        match self.peek() {
            None => Err(self.missing(cmd)),
            Some(tok) if tok.kind == TokenKind::BeginGroup => {
                let tok = tok.clone();
                self.pos += 1;
                let list = self.parse_list(Stops::group())?;
                self.expect_end_group(&tok)?;
                Ok(list)
            }
            Some(_) => {
                let mut nodes = Vec::new();
                match self.parse_node()? {
                    Some(n) => nodes.push(n),
                    None => return self.parse_field(cmd),
                }
                Ok(MathList(nodes))
            }
        }
    }

    /// Captures the raw source of a braced argument without math-parsing it.
    fn capture_braced_text(&mut self, cmd: &str) -> Result<String, ParseError> {
        let open = match self.next() {
            Some(t) if t.kind == TokenKind::BeginGroup => t,
            _ => return Err(self.missing(cmd)),
        };
        let mut depth = 1;
        let start = self.pos;
        while let Some(t) = self.next() {
            match t.kind {
                TokenKind::BeginGroup => depth += 1,
                TokenKind::EndGroup => {
                    depth -= 1;
                    if depth == 0 {
                        let end_tok = t;
                        let text = self.source_between(start, end_tok, open);
                        return Ok(text);
                    }
                }
                _ => {}
            }
        }
        Err(ParseError::UnbalancedGroup {
            line: open.line,
            col: open.col,
        })
    }

    fn source_between(&self, start_idx: usize, end_tok: &Token, open: &Token) -> String {
        // Reconstruct from the raw input using byte positions computed from
        // line/col (input is re-scanned; lines are 1-based).
        let offset_of = |line: usize, col: usize| -> usize {
            let mut cur_line = 1;
            let mut pos = 0;
            for (i, c) in self.input.char_indices() {
                if cur_line == line {
                    let line_start = i;
                    return line_start + prefix_bytes(&self.input[line_start..], col - 1);
                }
                if c == '\n' {
                    cur_line += 1;
                }
                pos = i + c.len_utf8();
            }
            pos
        };
        let start_tok = self.tokens.get(start_idx);
        let begin = match start_tok {
            Some(t) => offset_of(t.line, t.col),
            None => offset_of(open.line, open.col + 1),
        };
        let end = offset_of(end_tok.line, end_tok.col);
        if begin <= end && end <= self.input.len() {
            self.input[begin..end].trim().to_string()
        } else {
            String::new()
        }
    }

    /// A decimal factor written in char tokens, e.g. `2`, `0`, `1.5`, `-2`.
    fn parse_decimal_milli(&mut self, cmd: &str) -> Result<i64, ParseError> {
        let braced = matches!(self.peek(), Some(t) if t.kind == TokenKind::BeginGroup);
        if braced {
            self.pos += 1;
        }
        let mut text = String::new();
        while let Some(t) = self.peek() {
            match t.kind {
                TokenKind::Char => {
                    let c = t.text.chars().next().unwrap();
                    if c.is_ascii_digit() || c == '.' || c == '-' || c == '+' {
                        text.push(c);
                        self.pos += 1;
                    } else {
                        break;
                    }
                }
                _ => break,
            }
        }
        if braced {
            match self.next() {
                Some(t) if t.kind == TokenKind::EndGroup => {}
                _ => return Err(self.missing(cmd)),
            }
        }
        decimal_to_milli(&text).ok_or_else(|| self.missing(cmd))
    }

    fn parse_integer_arg(&mut self, cmd: &str) -> Result<i64, ParseError> {
        let milli = self.parse_decimal_milli(cmd)?;
        Ok(milli / 1000)
    }

    // --- @-ligatures ---------------------------------------------------

    fn parse_at_ligature(&mut self, tok: &Token) -> Result<Node, ParseError> {
        match tok.text.as_str() {
            "," => Ok(Node::Space(SpaceCommand::AtComma)),
            "!" => Ok(Node::Space(SpaceCommand::AtBang)),
            "." => Ok(Node::Arrow(Arrow {
                dir: ArrowDir::Blank,
                top: MathList::default(),
                bottom: MathList::default(),
            })),
            "=" => Ok(Node::Arrow(Arrow {
                dir: ArrowDir::Equals,
                top: MathList::default(),
                bottom: MathList::default(),
            })),
            "|" | "vert" => Ok(Node::Arrow(Arrow {
                dir: ArrowDir::VertLine,
                top: MathList::default(),
                bottom: MathList::default(),
            })),
            ">" => self.parse_harrow(ArrowDir::Right, '>'),
            "<" => self.parse_harrow(ArrowDir::Left, '<'),
            "A" => self.parse_harrow(ArrowDir::Up, 'A'),
            "V" => self.parse_harrow(ArrowDir::Down, 'V'),
            _ => Err(ParseError::InvalidCharacter {
                ch: '@',
                line: tok.line,
                col: tok.col,
            }),
        }
    }

    fn parse_harrow(&mut self, dir: ArrowDir, delim: char) -> Result<Node, ParseError> {
        let stop: &'static [char] = match delim {
            '>' => &['>'],
            '<' => &['<'],
            'A' => &['A'],
            _ => &['V'],
        };
        let top = self.parse_list(Stops::until_chars(stop))?;
        self.expect_char(delim)?;
        let bottom = self.parse_list(Stops::until_chars(stop))?;
        self.expect_char(delim)?;
        Ok(Node::Arrow(Arrow { dir, top, bottom }))
    }

    fn expect_char(&mut self, c: char) -> Result<(), ParseError> {
        match self.next() {
            Some(t) if t.is_char(c) => Ok(()),
            Some(t) => Err(ParseError::MissingArgument {
                name: c.to_string(),
                line: t.line,
                col: t.col,
            }),
            None => Err(self.missing(&c.to_string())),
        }
    }

    fn expect_word(&mut self, name: &str) -> Result<(), ParseError> {
        match self.next() {
            Some(t) if t.is_control(name) => Ok(()),
            Some(t) => Err(ParseError::MissingArgument {
                name: name.to_string(),
                line: t.line,
                col: t.col,
            }),
            None => Err(self.missing(name)),
        }
    }

    // --- command dispatch ----------------------------------------------

    fn parse_command(&mut self, tok: &'a Token) -> Result<Option<Node>, ParseError> {
        let name = tok.text.as_str();
        match name {
            // spacing
            "," => return Ok(Some(Node::Space(SpaceCommand::Thin))),
            "!" => return Ok(Some(Node::Space(SpaceCommand::NegThin))),
            ";" => return Ok(Some(Node::Space(SpaceCommand::Thick))),
            ":" => return Ok(Some(Node::Space(SpaceCommand::Colon))),
            "{" => {
                return Ok(Some(Node::Atom(Atom::new(
                    AtomClass::Open,
                    Nucleus::Symbol("lbrace".into()),
                ))))
            }
            "}" => {
                return Ok(Some(Node::Atom(Atom::new(
                    AtomClass::Close,
                    Nucleus::Symbol("rbrace".into()),
                ))))
            }
            "|" => {
                return Ok(Some(Node::Atom(Atom::new(
                    AtomClass::Ord,
                    Nucleus::Symbol("Vert".into()),
                ))))
            }
            "\\" => {
                // row separator outside an environment
                return Err(ParseError::MisplacedAlignTab {
                    line: tok.line,
                    col: tok.col,
                });
            }
            _ => {}
        }
        if tok.kind == TokenKind::ControlSymbol {
            return Err(self.unknown(tok));
        }
        match name {
            "thinspace" => Ok(Some(Node::Space(SpaceCommand::Thin))),
            "negthinspace" => Ok(Some(Node::Space(SpaceCommand::NegThin))),
            "medspace" => Ok(Some(Node::Space(SpaceCommand::Med))),
            "negmedspace" => Ok(Some(Node::Space(SpaceCommand::NegMed))),
            "thickspace" => Ok(Some(Node::Space(SpaceCommand::Thick))),
            "negthickspace" => Ok(Some(Node::Space(SpaceCommand::NegThick))),
            "quad" => Ok(Some(Node::Space(SpaceCommand::Quad))),
            "qquad" => Ok(Some(Node::Space(SpaceCommand::QQuad))),

            // styles
            "dsize" | "displaystyle" => Ok(Some(Node::Style(StyleLevel::Display))),
            "tsize" | "textstyle" => Ok(Some(Node::Style(StyleLevel::Text))),
            "ssize" | "scriptstyle" => Ok(Some(Node::Style(StyleLevel::Script))),
            "sssize" | "scriptscriptstyle" => Ok(Some(Node::Style(StyleLevel::ScriptScript))),

            // fractions
            "frac" => self.finish_fraction(FracThickness::Default, None, None),
            "dfrac" => {
                self.finish_fraction(FracThickness::Default, None, Some(StyleLevel::Display))
            }
            "tfrac" => self.finish_fraction(FracThickness::Default, None, Some(StyleLevel::Text)),
            "binom" => self.finish_fraction(
                FracThickness::ExMilli(0),
                Some((Delim::Char('('), Delim::Char(')'))),
                None,
            ),
            "dbinom" => self.finish_fraction(
                FracThickness::ExMilli(0),
                Some((Delim::Char('('), Delim::Char(')'))),
                Some(StyleLevel::Display),
            ),
            "tbinom" => self.finish_fraction(
                FracThickness::ExMilli(0),
                Some((Delim::Char('('), Delim::Char(')'))),
                Some(StyleLevel::Text),
            ),
            "thickfrac" => {
                let thickness = self.parse_thickness()?;
                self.finish_fraction(thickness, None, None)
            }
            "fracwithdelims" => {
                let l = self.parse_delim("fracwithdelims")?;
                let r = self.parse_delim("fracwithdelims")?;
                self.finish_fraction(FracThickness::Default, Some((l, r)), None)
            }
            "thickfracwithdelims" => {
                let l = self.parse_delim("thickfracwithdelims")?;
                let r = self.parse_delim("thickfracwithdelims")?;
                let thickness = self.parse_thickness()?;
                self.finish_fraction(thickness, Some((l, r)), None)
            }
            "cfrac" => self.parse_cfrac(CfracAlign::Center),
            "lcfrac" => self.parse_cfrac(CfracAlign::Left),
            "rcfrac" => self.parse_cfrac(CfracAlign::Right),

            // radicals
            "sqrt" => {
                let radicand = self.parse_field("sqrt")?;
                Ok(Some(Node::Radical(Radical {
                    radicand,
                    degree: None,
                    uproot: 0,
                    leftroot: 0,
                })))
            }
            "root" => self.parse_root(),

            // dots
            "dots" => self.parse_dots(DotsHint::Auto),
            "ldots" => self.parse_dots(DotsHint::Ldots),
            "cdots" => self.parse_dots(DotsHint::Cdots),
            "dotsb" => self.parse_dots(DotsHint::Dotsb),
            "dotsc" => self.parse_dots(DotsHint::Dotsc),
            "dotsi" => self.parse_dots(DotsHint::Dotsi),
            "dotsm" => self.parse_dots(DotsHint::Dotsm),
            "dotso" => self.parse_dots(DotsHint::Dotso),

            // operators
            "operatorname" => {
                let text = self.capture_braced_text("operatorname")?;
                Ok(Some(Node::Atom(Atom::new(
                    AtomClass::Op,
                    Nucleus::OpName {
                        text,
                        name: None,
                        with_limits: false,
                    },
                ))))
            }
            "operatornamewithlimits" => {
                let text = self.capture_braced_text("operatornamewithlimits")?;
                Ok(Some(Node::Atom(Atom::new(
                    AtomClass::Op,
                    Nucleus::OpName {
                        text,
                        name: None,
                        with_limits: true,
                    },
                ))))
            }
            "varinjlim" => Ok(Some(varlim(VarLimKind::Inj))),
            "varprojlim" => Ok(Some(varlim(VarLimKind::Proj))),
            "varliminf" => Ok(Some(varlim(VarLimKind::LimInf))),
            "varlimsup" => Ok(Some(varlim(VarLimKind::LimSup))),

            // multiple integrals
            "iint" => Ok(Some(multint(MultIntKind::IInt))),
            "iiint" => Ok(Some(multint(MultIntKind::IIInt))),
            "iiiint" => Ok(Some(multint(MultIntKind::IIIInt))),
            "idotsint" => Ok(Some(multint(MultIntKind::IDotsInt))),

            // accents
            _ if ACCENTS.contains(&name) => {
                let base = self.parse_field(name)?;
                Ok(Some(Node::Accent(Accent {
                    base,
                    slot: name.to_string(),
                    exact: false,
                })))
            }
            _ if EXACT_ACCENTS.contains(&name) => {
                let base = self.parse_field(name)?;
                Ok(Some(Node::Accent(Accent {
                    base,
                    slot: name.to_ascii_lowercase(),
                    exact: true,
                })))
            }
            "dddot" => self.parse_decoration(DecorationKind::Dddot),
            "ddddot" => self.parse_decoration(DecorationKind::Ddddot),

            // decorations
            "boxed" => self.parse_decoration(DecorationKind::Boxed),
            "pmb" => self.parse_decoration(DecorationKind::Pmb),
            "smash" => self.parse_decoration(DecorationKind::Smash),
            "topsmash" => self.parse_decoration(DecorationKind::TopSmash),
            "botsmash" => self.parse_decoration(DecorationKind::BotSmash),
            "shave" => self.parse_decoration(DecorationKind::Shave),
            "topshave" => self.parse_decoration(DecorationKind::TopShave),
            "botshave" => self.parse_decoration(DecorationKind::BotShave),
            "underline" => self.parse_decoration(DecorationKind::Underline),
            "overline" => self.parse_decoration(DecorationKind::Overline),
            "vphantom" => self.parse_decoration(DecorationKind::VPhantom),
            "hphantom" => self.parse_decoration(DecorationKind::HPhantom),
            "phantom" => self.parse_decoration(DecorationKind::Phantom),
            "mathstrut" => Ok(Some(Node::MathStrut)),
            "strut" => Ok(Some(Node::Strut)),
            "pretend" => {
                let body = self.parse_list(Stops::until_words(&["haswidth"]))?;
                self.expect_word("haswidth")?;
                let reference = self.parse_field("haswidth")?;
                Ok(Some(Node::Decoration(Decoration {
                    kind: DecorationKind::PretendWidth,
                    body,
                    reference: Some(reference),
                })))
            }
            _ if sp_decoration(name).is_some() => Ok(Some(Node::Decoration(Decoration {
                kind: sp_decoration(name).unwrap(),
                body: MathList::default(),
                reference: None,
            }))),

            // over/under constructions
            "overset" => self.parse_overset(OverUnderKind::Overset),
            "underset" => self.parse_overset(OverUnderKind::Underset),
            "oversetbrace" => self.parse_overset(OverUnderKind::OversetBrace),
            "undersetbrace" => self.parse_overset(OverUnderKind::UndersetBrace),
            "overrightarrow" | "overarrow" => {
                self.parse_arrow_overunder(OverUnderKind::OverRightArrow)
            }
            "overleftarrow" => self.parse_arrow_overunder(OverUnderKind::OverLeftArrow),
            "overleftrightarrow" => {
                self.parse_arrow_overunder(OverUnderKind::OverLeftRightArrow)
            }
            "underrightarrow" | "underarrow" => {
                self.parse_arrow_overunder(OverUnderKind::UnderRightArrow)
            }
            "underleftarrow" => self.parse_arrow_overunder(OverUnderKind::UnderLeftArrow),
            "underleftrightarrow" => {
                self.parse_arrow_overunder(OverUnderKind::UnderLeftRightArrow)
            }
            "sideset" => {
                let pre = self.parse_list(Stops::until_words(&["and"]))?;
                self.expect_word("and")?;
                let post = self.parse_list(Stops::until_words(&["to"]))?;
                self.expect_word("to")?;
                let base = self.parse_field("sideset")?;
                Ok(Some(Node::SideSet(SideSet { pre, post, base })))
            }

            // mod family
            "mod" => {
                let arg = self.parse_field("mod")?;
                Ok(Some(Node::ModOp(ModOp {
                    kind: ModKind::Mod,
                    arg: Some(arg),
                })))
            }
            "bmod" => Ok(Some(Node::ModOp(ModOp {
                kind: ModKind::Bmod,
                arg: None,
            }))),
            "pmod" => {
                let arg = self.parse_field("pmod")?;
                Ok(Some(Node::ModOp(ModOp {
                    kind: ModKind::Pmod,
                    arg: Some(arg),
                })))
            }
            "pod" => {
                let arg = self.parse_field("pod")?;
                Ok(Some(Node::ModOp(ModOp {
                    kind: ModKind::Pod,
                    arg: Some(arg),
                })))
            }

            // text and fonts
            "text" => {
                let text = self.capture_braced_text("text")?;
                Ok(Some(Node::Text(text)))
            }
            "Cal" => self.parse_variant(Variant::Cal),
            "bold" => self.parse_variant(Variant::Bold),
            "roman" => self.parse_variant(Variant::Roman),
            "slanted" => self.parse_variant(Variant::Slanted),
            "italic" => self.parse_variant(Variant::Italic),
            "Bbb" => self.parse_variant(Variant::Bbb),

            // fences
            "left" => {
                let left = self.parse_delim("left")?;
                let body = self.parse_list(Stops::until_words(&["right"]))?;
                self.expect_word("right")?;
                let right = self.parse_delim("right")?;
                Ok(Some(Node::Fenced(Fenced { left, right, body })))
            }
            "right" => Err(self.unknown(tok)),
            _ if big_delim_size(name).is_some() => {
                let (size, class) = big_delim_size(name).unwrap();
                let delim = self.parse_delim(name)?;
                Ok(Some(Node::BigDelim(BigDelim {
                    size,
                    delim,
                    class,
                    command: name.to_string(),
                })))
            }

            // tables
            "matrix" => self.parse_table(TableKind::Matrix { delims: None }, "endmatrix"),
            "pmatrix" => self.parse_table(
                TableKind::Matrix {
                    delims: Some((Delim::Char('('), Delim::Char(')'))),
                },
                "endpmatrix",
            ),
            "bmatrix" => self.parse_table(
                TableKind::Matrix {
                    delims: Some((Delim::Char('['), Delim::Char(']'))),
                },
                "endbmatrix",
            ),
            "vmatrix" => self.parse_table(
                TableKind::Matrix {
                    delims: Some((Delim::Char('|'), Delim::Char('|'))),
                },
                "endvmatrix",
            ),
            "Vmatrix" => self.parse_table(
                TableKind::Matrix {
                    delims: Some((Delim::Symbol("Vert"), Delim::Symbol("Vert"))),
                },
                "endVmatrix",
            ),
            "smallmatrix" => self.parse_table(TableKind::SmallMatrix, "endsmallmatrix"),
            "cases" => self.parse_table(TableKind::Cases, "endcases"),
            "aligned" => self.parse_table(TableKind::Aligned(VPos::Center), "endaligned"),
            "topaligned" => self.parse_table(TableKind::Aligned(VPos::Top), "endtopaligned"),
            "botaligned" => {
                self.parse_table(TableKind::Aligned(VPos::Bottom), "endbotaligned")
            }
            "alignedat" => {
                let pairs = self.parse_integer_arg("alignedat")?.max(1) as usize;
                self.parse_table(TableKind::AlignedAt { pairs }, "endalignedat")
            }
            "gathered" => self.parse_table(TableKind::Gathered, "endgathered"),
            "CD" => self.parse_cd(),

            // displays
            "align" => self.parse_display(DisplayKind::Align, "endalign"),
            "gather" => self.parse_display(DisplayKind::Gather, "endgather"),
            "alignat" => {
                let pairs = self.parse_integer_arg("alignat")?.max(1) as usize;
                self.parse_display(
                    DisplayKind::Alignat {
                        pairs,
                        spread: AlignatSpread::None,
                    },
                    "endalignat",
                )
            }
            "xalignat" => {
                let pairs = self.parse_integer_arg("xalignat")?.max(1) as usize;
                self.parse_display(
                    DisplayKind::Alignat {
                        pairs,
                        spread: AlignatSpread::X,
                    },
                    "endxalignat",
                )
            }
            "xxalignat" => {
                let pairs = self.parse_integer_arg("xxalignat")?.max(1) as usize;
                self.parse_display(
                    DisplayKind::Alignat {
                        pairs,
                        spread: AlignatSpread::XX,
                    },
                    "endxxalignat",
                )
            }
            "split" => self.parse_display(DisplayKind::Split, "endsplit"),
            "multline" => self.parse_display(DisplayKind::Multline, "endmultline"),
            "tag" => {
                let tag = self.parse_tag()?;
                Ok(Some(Node::PendingTag(Box::new(tag))))
            }

            // penalties / breaks
            "mathbreak" => Ok(Some(Node::Penalty(PenaltyKind::MathBreak))),
            "nomathbreak" => Ok(Some(Node::Penalty(PenaltyKind::NoMathBreak))),
            "allowmathbreak" => Ok(Some(Node::Penalty(PenaltyKind::AllowMathBreak))),

            // configuration commands (collected, no output)
            "LimitsOnSums" => self.set_config(|c| c.limits.sums = LimitsDefault::DisplayLimits),
            "NoLimitsOnSums" => self.set_config(|c| c.limits.sums = LimitsDefault::NoLimits),
            "LimitsOnInts" => self.set_config(|c| c.limits.ints = LimitsDefault::DisplayLimits),
            "NoLimitsOnInts" => self.set_config(|c| c.limits.ints = LimitsDefault::NoLimits),
            "LimitsOnNames" => self.set_config(|c| c.limits.names = LimitsDefault::DisplayLimits),
            "NoLimitsOnNames" => self.set_config(|c| c.limits.names = LimitsDefault::NoLimits),
            "TagsOnLeft" => self.set_config(|c| c.tags_side = Some(TagsSide::Left)),
            "TagsOnRight" => self.set_config(|c| c.tags_side = Some(TagsSide::Right)),
            "MathTagsAllowed" => self.set_config(|c| c.math_tags = Some(true)),
            "NoMathTags" => self.set_config(|c| c.math_tags = Some(false)),
            "CenteredTagsOnSplits" => {
                self.set_config(|c| c.centered_split_tags = Some(true))
            }
            "allowdisplaybreaks" => self.set_config(|c| c.allow_display_breaks = true),
            "MultlineGap" | "multlinegap" => {
                let text = self.capture_braced_text(name)?;
                self.set_config(|c| c.multline_gap = Some(text.clone()))
            }
            "NoMultlineGap" => self.set_config(|c| c.multline_gap = Some("0pt".into())),
            "minCDarrowwidth" => {
                let text = self.capture_braced_text(name)?;
                self.set_config(|c| c.min_cd_arrow = Some(text.clone()))
            }
            "spreadlines" => {
                let text = self.capture_braced_text(name)?;
                self.set_config(|c| c.spread_lines = Some(text.clone()))
            }
            "spreadmatrixlines" => {
                let text = self.capture_braced_text(name)?;
                self.set_config(|c| c.spread_matrix_lines = Some(text.clone()))
            }
            "ChangeBuffer" => {
                let text = self.capture_braced_text(name)?;
                self.set_config(|c| c.op_buffer = Some(BufferChange::Set(text.clone())))
            }
            "RestoreBuffer" => {
                self.set_config(|c| c.op_buffer = Some(BufferChange::Restore))
            }

            // named operators and registry symbols
            _ if is_operator_name(name) => Ok(Some(Node::Atom(Atom::new(
                AtomClass::Op,
                Nucleus::OpName {
                    text: name.to_string(),
                    name: Some(name.to_string()),
                    with_limits: false,
                },
            )))),
            _ => match registry().lookup(name) {
                Ok(info) => Ok(Some(Node::Atom(Atom::new(
                    info.class,
                    Nucleus::Symbol(name.to_string()),
                )))),
                Err(_) => Err(self.unknown(tok)),
            },
        }
    }

    fn set_config(&mut self, f: impl Fn(&mut EnvConfig)) -> Result<Option<Node>, ParseError> {
        f(&mut self.config);
        Ok(None)
    }

    fn parse_variant(&mut self, variant: Variant) -> Result<Option<Node>, ParseError> {
        let body = self.parse_field("font variant")?;
        Ok(Some(Node::FontVariant(FontVariant { variant, body })))
    }

    fn parse_decoration(&mut self, kind: DecorationKind) -> Result<Option<Node>, ParseError> {
        let body = self.parse_field(kind.command())?;
        Ok(Some(Node::Decoration(Decoration {
            kind,
            body,
            reference: None,
        })))
    }

    fn parse_overset(&mut self, kind: OverUnderKind) -> Result<Option<Node>, ParseError> {
        let annotation = self.parse_list(Stops::until_words(&["to"]))?;
        self.expect_word("to")?;
        let base = self.parse_field("to")?;
        Ok(Some(Node::OverUnder(OverUnder {
            kind,
            base,
            annotation,
        })))
    }

    fn parse_arrow_overunder(&mut self, kind: OverUnderKind) -> Result<Option<Node>, ParseError> {
        let base = self.parse_field("arrow")?;
        Ok(Some(Node::OverUnder(OverUnder {
            kind,
            base,
            annotation: MathList::default(),
        })))
    }

    fn parse_dots(&mut self, hint: DotsHint) -> Result<Option<Node>, ParseError> {
        let right = match self.peek() {
            None => NeighborContext::End,
            Some(t) => match t.kind {
                TokenKind::Char => NeighborContext::Char(t.text.chars().next().unwrap()),
                TokenKind::ControlWord => NeighborContext::Command(t.text.clone()),
                TokenKind::ControlSymbol => match t.text.as_str() {
                    "{" => NeighborContext::Command("lbrace".into()),
                    "}" => NeighborContext::Command("rbrace".into()),
                    "|" => NeighborContext::Command("Vert".into()),
                    _ => NeighborContext::Other,
                },
                TokenKind::MathShift => NeighborContext::End,
                _ => NeighborContext::Other,
            },
        };
        let decision = resolve_dots(None, &right, hint);
        Ok(Some(Node::Dots(DotsNode { hint, decision })))
    }

    fn parse_thickness(&mut self) -> Result<FracThickness, ParseError> {
        match self.peek() {
            Some(t) if t.is_control("thickness") => {
                self.pos += 1;
                let milli = self.parse_decimal_milli("thickness")?;
                Ok(FracThickness::ExMilli(milli))
            }
            _ => Ok(FracThickness::ExMilli(1000)),
        }
    }

    fn finish_fraction(
        &mut self,
        thickness: FracThickness,
        delims: Option<(Delim, Delim)>,
        style_force: Option<StyleLevel>,
    ) -> Result<Option<Node>, ParseError> {
        let num = self.parse_field("fraction")?;
        let den = self.parse_field("fraction")?;
        Ok(Some(Node::Fraction(Fraction {
            num,
            den,
            thickness,
            delims,
            style_force,
        })))
    }

    fn parse_cfrac(&mut self, align: CfracAlign) -> Result<Option<Node>, ParseError> {
        let mut rows = Vec::new();
        loop {
            let row = self.parse_list(Stops::cell(&[]))?;
            rows.push(row);
            match self.peek() {
                Some(t) if t.is_control("\\") => {
                    self.pos += 1;
                }
                Some(t) if t.is_control("endcfrac") => {
                    self.pos += 1;
                    break;
                }
                Some(t) => {
                    let t = t.clone();
                    return Err(self.env_mismatch("endcfrac", &t));
                }
                None => return Err(self.missing("endcfrac")),
            }
        }
        Ok(Some(Node::ContinuedFraction(ContinuedFraction {
            rows,
            align,
        })))
    }

    fn parse_root(&mut self) -> Result<Option<Node>, ParseError> {
        let mut uproot = 0;
        let mut leftroot = 0;
        // \uproot and \leftroot may come first, in either order.
        loop {
            match self.peek() {
                Some(t) if t.is_control("uproot") => {
                    self.pos += 1;
                    uproot = self.parse_integer_arg("uproot")?;
                }
                Some(t) if t.is_control("leftroot") => {
                    self.pos += 1;
                    leftroot = self.parse_integer_arg("leftroot")?;
                }
                _ => break,
            }
        }
        let degree = self.parse_list(Stops::until_words(&["of"]))?;
        self.expect_word("of")?;
        let radicand = self.parse_field("of")?;
        Ok(Some(Node::Radical(Radical {
            radicand,
            degree: if degree.is_empty() {
                None
            } else {
                Some(degree)
            },
            uproot,
            leftroot,
        })))
    }

    fn parse_delim(&mut self, cmd: &str) -> Result<Delim, ParseError> {
        match self.next() {
            None => Err(self.missing(cmd)),
            Some(t) => match t.kind {
                TokenKind::Char => {
                    let c = t.text.chars().next().unwrap();
                    match c {
                        '(' | ')' | '[' | ']' | '|' | '/' | '<' | '>' => Ok(Delim::Char(c)),
                        '.' => Ok(Delim::Null),
                        _ => Err(ParseError::InvalidCharacter {
                            ch: c,
                            line: t.line,
                            col: t.col,
                        }),
                    }
                }
                TokenKind::ControlSymbol if t.text == "{" => Ok(Delim::Symbol("lbrace")),
                TokenKind::ControlSymbol if t.text == "}" => Ok(Delim::Symbol("rbrace")),
                TokenKind::ControlSymbol if t.text == "|" => Ok(Delim::Symbol("Vert")),
                TokenKind::ControlWord => {
                    let name = t.text.as_str();
                    const DELIM_WORDS: &[&str] = &[
                        "lbrace",
                        "rbrace",
                        "langle",
                        "rangle",
                        "lceil",
                        "rceil",
                        "lfloor",
                        "rfloor",
                        "lgroup",
                        "rgroup",
                        "lmoustache",
                        "rmoustache",
                        "lbrack",
                        "rbrack",
                        "vert",
                        "Vert",
                        "uparrow",
                        "downarrow",
                        "updownarrow",
                        "Uparrow",
                        "Downarrow",
                        "Updownarrow",
                        "backslash",
                        "ulcorner",
                        "urcorner",
                        "llcorner",
                        "lrcorner",
                    ];
                    match DELIM_WORDS.iter().find(|w| **w == name) {
                        Some(w) => Ok(Delim::Symbol(w)),
                        None => Err(self.unknown(t)),
                    }
                }
                _ => Err(ParseError::MissingArgument {
                    name: cmd.to_string(),
                    line: t.line,
                    col: t.col,
                }),
            },
        }
    }

    // --- tables ---------------------------------------------------------

    fn parse_table(
        &mut self,
        kind: TableKind,
        end: &'static str,
    ) -> Result<Option<Node>, ParseError> {
        let saved_tab = self.tab_is_align;
        self.tab_is_align = matches!(
            kind,
            TableKind::Matrix { .. } | TableKind::SmallMatrix | TableKind::Cases
        );
        let result = self.parse_table_inner(kind, end);
        self.tab_is_align = saved_tab;
        result.map(Some)
    }

    fn parse_table_inner(
        &mut self,
        kind: TableKind,
        end: &'static str,
    ) -> Result<Node, ParseError> {
        // optional \format row
        let mut format = None;
        if matches!(self.peek(), Some(t) if t.is_control("format")) {
            self.pos += 1;
            format = Some(self.parse_format_row()?);
        }
        let mut rows: Vec<TableRow> = Vec::new();
        let mut cells: Vec<Cell> = Vec::new();
        let mut vspace_next: Option<String> = None;
        loop {
            let cell = self.parse_cell()?;
            cells.push(cell);
            let Some(t) = self.peek() else {
                return Err(self.missing(end));
            };
            if t.kind == TokenKind::AlignTab {
                self.pos += 1;
                continue;
            }
            if t.is_control("\\") {
                self.pos += 1;
                rows.push(TableRow {
                    cells: std::mem::take(&mut cells),
                    vspace: vspace_next.take(),
                });
                if matches!(self.peek(), Some(v) if v.is_control("vspace")) {
                    self.pos += 1;
                    vspace_next = Some(self.capture_braced_text("vspace")?);
                }
                continue;
            }
            if t.is_control(end) {
                self.pos += 1;
                let trailing_empty = cells.len() == 1
                    && matches!(&cells[0], Cell::Math(m) if m.is_empty());
                if !trailing_empty || rows.is_empty() {
                    rows.push(TableRow {
                        cells,
                        vspace: vspace_next.take(),
                    });
                }
                break;
            }
            if t.kind == TokenKind::ControlWord && ENV_ENDS.contains(&t.text.as_str()) {
                let t = t.clone();
                return Err(self.env_mismatch(end, &t));
            }
            return Err(self.missing(end));
        }
        Ok(Node::Table(Table { kind, rows, format }))
    }

    fn parse_cell(&mut self) -> Result<Cell, ParseError> {
        // leader cells
        if let Some(t) = self.peek() {
            if t.is_control("hdotsfor") {
                self.pos += 1;
                let span = self.parse_integer_arg("hdotsfor")?.max(1) as usize;
                return Ok(Cell::HdotsFor {
                    multiplier_milli: 1000,
                    span,
                    after: None,
                });
            }
            if t.is_control("spacehdots") {
                self.pos += 1;
                let mult = self.parse_decimal_milli("spacehdots")?;
                self.expect_word("for")?;
                let span = self.parse_integer_arg("for")?.max(1) as usize;
                return Ok(Cell::HdotsFor {
                    multiplier_milli: mult,
                    span,
                    after: None,
                });
            }
            if t.is_control("innerhdotsfor") {
                self.pos += 1;
                let span = self.parse_integer_arg("innerhdotsfor")?.max(1) as usize;
                self.expect_word("after")?;
                let after = self.parse_field("after")?;
                return Ok(Cell::HdotsFor {
                    multiplier_milli: 1000,
                    span,
                    after: Some(after),
                });
            }
            if t.is_control("spaceinnerhdots") {
                self.pos += 1;
                let mult = self.parse_decimal_milli("spaceinnerhdots")?;
                self.expect_word("for")?;
                let span = self.parse_integer_arg("for")?.max(1) as usize;
                self.expect_word("after")?;
                let after = self.parse_field("after")?;
                return Ok(Cell::HdotsFor {
                    multiplier_milli: mult,
                    span,
                    after: Some(after),
                });
            }
        }
        let list = self.parse_list(Stops::cell(&[]))?;
        Ok(Cell::Math(list))
    }

    fn parse_format_row(&mut self) -> Result<Vec<ColumnSpec>, ParseError> {
        let mut cols = Vec::new();
        let mut pre_space = Vec::new();
        let mut align: Option<ColumnAlign> = None;
        loop {
            let Some(t) = self.next() else {
                return Err(self.missing("format"));
            };
            match t.kind {
                TokenKind::ControlWord if t.text == "l" => align = Some(ColumnAlign::Left),
                TokenKind::ControlWord if t.text == "c" => align = Some(ColumnAlign::Center),
                TokenKind::ControlWord if t.text == "r" => align = Some(ColumnAlign::Right),
                TokenKind::ControlWord if t.text == "quad" => {
                    pre_space.push(SpaceCommand::Quad)
                }
                TokenKind::ControlWord if t.text == "qquad" => {
                    pre_space.push(SpaceCommand::QQuad)
                }
                TokenKind::ControlSymbol if t.text == "," => {
                    pre_space.push(SpaceCommand::Thin)
                }
                TokenKind::ControlSymbol if t.text == ";" => {
                    pre_space.push(SpaceCommand::Thick)
                }
                TokenKind::AlignTab => {
                    cols.push(ColumnSpec {
                        align: align.take().unwrap_or(ColumnAlign::Center),
                        pre_space: std::mem::take(&mut pre_space),
                    });
                }
                TokenKind::ControlSymbol if t.text == "\\" => {
                    cols.push(ColumnSpec {
                        align: align.take().unwrap_or(ColumnAlign::Center),
                        pre_space: std::mem::take(&mut pre_space),
                    });
                    return Ok(cols);
                }
                _ => {
                    let t = t.clone();
                    return Err(self.unknown(&t));
                }
            }
        }
    }

    // --- commutative diagrams --------------------------------------------

    fn parse_cd(&mut self) -> Result<Option<Node>, ParseError> {
        let mut rows: Vec<TableRow> = Vec::new();
        let mut cells: Vec<Cell> = Vec::new();
        let mut current = MathList::default();
        let mut pending_skip = false;
        loop {
            let chunk = self.parse_list(Stops::cd_cell())?;
            current.0.extend(chunk.0);
            let Some(t) = self.peek() else {
                return Err(self.missing("endCD"));
            };
            if t.kind == TokenKind::AtLigature {
                let lig = t.text.clone();
                match lig.as_str() {
                    "," => {
                        self.pos += 1;
                        current.0.push(Node::Space(SpaceCommand::AtComma));
                        continue;
                    }
                    "!" => {
                        self.pos += 1;
                        current.0.push(Node::Space(SpaceCommand::AtBang));
                        continue;
                    }
                    _ => {}
                }
                let tok = t.clone();
                self.pos += 1;
                let arrow = match lig.as_str() {
                    ">" => self.parse_harrow(ArrowDir::Right, '>')?,
                    "<" => self.parse_harrow(ArrowDir::Left, '<')?,
                    "A" => self.parse_harrow(ArrowDir::Up, 'A')?,
                    "V" => self.parse_harrow(ArrowDir::Down, 'V')?,
                    "=" => Node::Arrow(Arrow {
                        dir: ArrowDir::Equals,
                        top: MathList::default(),
                        bottom: MathList::default(),
                    }),
                    "|" | "vert" => Node::Arrow(Arrow {
                        dir: ArrowDir::VertLine,
                        top: MathList::default(),
                        bottom: MathList::default(),
                    }),
                    "." => Node::Arrow(Arrow {
                        dir: ArrowDir::Blank,
                        top: MathList::default(),
                        bottom: MathList::default(),
                    }),
                    _ => {
                        return Err(ParseError::InvalidCharacter {
                            ch: '@',
                            line: tok.line,
                            col: tok.col,
                        })
                    }
                };
                // Horizontal arrows sit in their own odd column; vertical
                // material shares the object column and skips one.
                match arrow {
                    Node::Arrow(Arrow {
                        dir: ArrowDir::Right | ArrowDir::Left | ArrowDir::Equals,
                        ..
                    }) => {
                        cells.push(Cell::Math(std::mem::take(&mut current)));
                        cells.push(Cell::Math(MathList(vec![arrow])));
                        pending_skip = false;
                    }
                    Node::Arrow(Arrow {
                        dir: ArrowDir::Blank,
                        ..
                    }) => {
                        cells.push(Cell::Math(std::mem::take(&mut current)));
                        cells.push(Cell::Math(MathList::default()));
                        pending_skip = true;
                    }
                    _ => {
                        current.0.push(arrow);
                        cells.push(Cell::Math(std::mem::take(&mut current)));
                        cells.push(Cell::Math(MathList::default()));
                        pending_skip = true;
                    }
                }
                continue;
            }
            if t.is_control("\\") {
                self.pos += 1;
                if !current.is_empty() || !pending_skip {
                    cells.push(Cell::Math(std::mem::take(&mut current)));
                }
                current = MathList::default();
                rows.push(TableRow {
                    cells: std::mem::take(&mut cells),
                    vspace: None,
                });
                pending_skip = false;
                continue;
            }
            if t.is_control("endCD") {
                self.pos += 1;
                if !current.is_empty() || !pending_skip {
                    cells.push(Cell::Math(current));
                }
                if !cells.is_empty() {
                    rows.push(TableRow {
                        cells,
                        vspace: None,
                    });
                }
                break;
            }
            let t = t.clone();
            return Err(self.env_mismatch("endCD", &t));
        }
        Ok(Some(Node::Table(Table {
            kind: TableKind::CD,
            rows,
            format: None,
        })))
    }

    // --- display environments ---------------------------------------------

    fn parse_display(
        &mut self,
        kind: DisplayKind,
        end: &'static str,
    ) -> Result<Option<Node>, ParseError> {
        let mut rows: Vec<DisplayRow> = Vec::new();
        loop {
            // row-level prefixes
            if matches!(self.peek(), Some(t) if t.is_control("intertext")) {
                self.pos += 1;
                let text = self.capture_braced_text("intertext")?;
                rows.push(DisplayRow::Intertext(text));
                // an intertext is not a row of the alignment; it is followed
                // by the next row directly
            }
            let mut shove = None;
            if matches!(self.peek(), Some(t) if t.is_control("shoveleft")) {
                self.pos += 1;
                shove = Some(ColumnAlign::Left);
            } else if matches!(self.peek(), Some(t) if t.is_control("shoveright")) {
                self.pos += 1;
                shove = Some(ColumnAlign::Right);
            }
            let shoved_body = if shove.is_some() {
                Some(self.parse_field("shove")?)
            } else {
                None
            };
            let mut cells: Vec<MathList> = Vec::new();
            let mut tag: Option<TagContent> = None;
            let mut break_after: Option<RowBreak> = None;
            if let Some(body) = shoved_body {
                cells.push(body);
            }
            loop {
                let list = self.parse_list(Stops::cell(&["tag"]))?;
                if cells.is_empty() || !list.is_empty() || tag.is_none() {
                    if !(cells.len() == 1 && list.is_empty() && shove.is_some()) {
                        cells.push(list);
                    }
                }
                match self.peek() {
                    Some(t) if t.kind == TokenKind::AlignTab => {
                        self.pos += 1;
                        continue;
                    }
                    Some(t) if t.is_control("tag") => {
                        self.pos += 1;
                        tag = Some(self.parse_tag()?);
                        continue;
                    }
                    Some(t) if t.is_control("allowdisplaybreak") => {
                        self.pos += 1;
                        break_after = Some(RowBreak::Allow);
                        continue;
                    }
                    Some(t) if t.is_control("displaybreak") => {
                        self.pos += 1;
                        break_after = Some(RowBreak::Force);
                        continue;
                    }
                    _ => break,
                }
            }
            // drop empty trailing placeholder cells the tag capture produced
            while cells.len() > 1 && cells.last().map(|c| c.is_empty()).unwrap_or(false) {
                cells.pop();
            }
            let row_is_empty = cells.iter().all(|c| c.is_empty())
                && tag.is_none()
                && shove.is_none()
                && break_after.is_none();
            if !row_is_empty {
                rows.push(DisplayRow::Eq {
                    cells,
                    tag,
                    shove,
                    break_after,
                });
            }
            match self.peek() {
                Some(t) if t.is_control("\\") => {
                    self.pos += 1;
                    continue;
                }
                Some(t) if t.is_control(end) => {
                    self.pos += 1;
                    break;
                }
                Some(t) if t.kind == TokenKind::ControlWord
                    && ENV_ENDS.contains(&t.text.as_str()) =>
                {
                    let t = t.clone();
                    return Err(self.env_mismatch(end, &t));
                }
                Some(_) => {
                    let t = self.peek().unwrap();
                    let t = t.clone();
                    return Err(self.env_mismatch(end, &t));
                }
                None => return Err(self.missing(end)),
            }
        }
        Ok(Some(Node::DisplayEnv(DisplayEnv { kind, rows })))
    }

    /// `\tag` captures to the end of the row; `\tag"..."` is the literal
    /// form.
    fn parse_tag(&mut self) -> Result<TagContent, ParseError> {
        if matches!(self.peek(), Some(t) if t.is_char('"')) {
            self.pos += 1;
            let start = self.pos;
            while let Some(t) = self.peek() {
                if t.is_char('"') {
                    let end_tok = t.clone();
                    let text = self.source_between(start, &end_tok, &end_tok);
                    self.pos += 1;
                    return Ok(TagContent::Literal(text));
                }
                self.pos += 1;
            }
            return Err(self.missing("tag"));
        }
        let start = self.pos;
        let list = self.parse_list(Stops::cell(&["allowdisplaybreak", "displaybreak"]))?;
        if self.config.math_tags == Some(true) {
            return Ok(TagContent::Math(list));
        }
        // plain text tag: reconstruct the raw source
        let end_tok = self
            .peek()
            .cloned()
            .unwrap_or_else(|| Token {
                kind: TokenKind::Char,
                text: String::new(),
                line: self.last_pos().0,
                col: self.last_pos().1,
            });
        let text = self.source_between(start, &end_tok, &end_tok);
        Ok(TagContent::Text(text))
    }
}

enum ScriptSlot<'n> {
    Taken,
    Set(&'n mut Option<MathList>),
    Append(&'n mut MathList),
}

fn ends_with_prime(list: &MathList) -> bool {
    matches!(
        list.0.last(),
        Some(Node::Atom(a)) if matches!(&a.nucleus, Nucleus::Symbol(s) if s == "prime")
    )
}

fn varlim(kind: VarLimKind) -> Node {
    Node::Atom(Atom::new(AtomClass::Op, Nucleus::VarLim(kind)))
}

fn multint(kind: MultIntKind) -> Node {
    Node::MultInt(MultInt {
        kind,
        limits: LimitsRequest::Auto,
        sup: None,
        sub: None,
    })
}

fn sp_decoration(name: &str) -> Option<DecorationKind> {
    Some(match name {
        "sphat" => DecorationKind::SpHat,
        "spcheck" => DecorationKind::SpCheck,
        "sptilde" => DecorationKind::SpTilde,
        "spacute" => DecorationKind::SpAcute,
        "spgrave" => DecorationKind::SpGrave,
        "spdot" => DecorationKind::SpDot,
        "spddot" => DecorationKind::SpDdot,
        "spdddot" => DecorationKind::SpDddot,
        "spddddot" => DecorationKind::SpDdddot,
        "spbreve" => DecorationKind::SpBreve,
        "spbar" => DecorationKind::SpBar,
        "spvec" => DecorationKind::SpVec,
        _ => return None,
    })
}

fn big_delim_size(name: &str) -> Option<(u8, AtomClass)> {
    let (base, class) = if let Some(b) = name.strip_suffix('l') {
        (b, AtomClass::Open)
    } else if let Some(b) = name.strip_suffix('r') {
        (b, AtomClass::Close)
    } else if let Some(b) = name.strip_suffix('m') {
        (b, AtomClass::Rel)
    } else {
        (name, AtomClass::Ord)
    };
    let size = match base {
        "big" => 1,
        "Big" => 2,
        "bigg" => 3,
        "Bigg" => 4,
        _ => return None,
    };
    Some((size, class))
}

fn node_natural_class(node: &Node) -> AtomClass {
    match node {
        Node::Atom(a) => a.class,
        Node::Fraction(_) | Node::ContinuedFraction(_) | Node::Fenced(_) => AtomClass::Inner,
        Node::Radical(_) | Node::Accent(_) => AtomClass::Ord,
        Node::Dots(_) => AtomClass::Inner,
        Node::MultInt(_) => AtomClass::Op,
        Node::BigDelim(b) => b.class,
        Node::OverUnder(_) | Node::SideSet(_) => AtomClass::Ord,
        _ => AtomClass::Ord,
    }
}

/// Plain math codes for raw characters.
pub fn char_class(c: char) -> AtomClass {
    match c {
        '+' | '-' | '*' => AtomClass::Bin,
        '=' | '<' | '>' | ':' => AtomClass::Rel,
        ',' | ';' => AtomClass::Punct,
        '!' | '?' | ')' | ']' => AtomClass::Close,
        '(' | '[' => AtomClass::Open,
        _ => AtomClass::Ord,
    }
}

fn prefix_bytes(line: &str, cols: usize) -> usize {
    line.char_indices()
        .nth(cols)
        .map(|(i, _)| i)
        .unwrap_or(line.len())
}

fn decimal_to_milli(text: &str) -> Option<i64> {
    let text = text.trim();
    if text.is_empty() {
        return None;
    }
    let (neg, rest) = match text.strip_prefix('-') {
        Some(r) => (true, r),
        None => (false, text.strip_prefix('+').unwrap_or(text)),
    };
    let (int_str, frac_str) = match rest.split_once('.') {
        Some((i, f)) => (i, f),
        None => (rest, ""),
    };
    let int_part: i64 = if int_str.is_empty() {
        0
    } else {
        int_str.parse().ok()?
    };
    let mut frac: i64 = 0;
    let mut scale = 100;
    for c in frac_str.chars().take(3) {
        frac += (c.to_digit(10)? as i64) * scale;
        scale /= 10;
    }
    let milli = int_part * 1000 + frac;
    Some(if neg { -milli } else { milli })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(input: &str) -> MathList {
        parse_expression(input).expect("parse").0
    }

    #[test]
    fn dfrac_forces_display_style() {
        let list = parse(r"\dfrac{1}{2}");
        match &list.0[0] {
            Node::Fraction(f) => {
                assert_eq!(f.style_force, Some(StyleLevel::Display));
                assert_eq!(f.thickness, FracThickness::Default);
            }
            other => panic!("expected fraction, got {other:?}"),
        }
    }

    #[test]
    fn binom_is_a_zero_rule_fraction_with_parens() {
        let list = parse(r"\binom{n}{k}");
        match &list.0[0] {
            Node::Fraction(f) => {
                assert_eq!(f.thickness, FracThickness::ExMilli(0));
                assert_eq!(f.delims, Some((Delim::Char('('), Delim::Char(')'))));
            }
            other => panic!("expected fraction, got {other:?}"),
        }
    }

    #[test]
    fn root_takes_adjustments_in_either_order() {
        let list = parse(r"\root\leftroot{-2}\uproot2 \beta \of k");
        match &list.0[0] {
            Node::Radical(r) => {
                assert_eq!(r.leftroot, -2);
                assert_eq!(r.uproot, 2);
                assert!(r.degree.is_some());
            }
            other => panic!("expected radical, got {other:?}"),
        }
        let list = parse(r"\root\uproot{2}\leftroot{-2}\beta\of k");
        match &list.0[0] {
            Node::Radical(r) => {
                assert_eq!(r.leftroot, -2);
                assert_eq!(r.uproot, 2);
            }
            other => panic!("expected radical, got {other:?}"),
        }
    }

    #[test]
    fn overset_uses_to_as_hard_delimiter() {
        let list = parse(r"\overset A\to B");
        match &list.0[0] {
            Node::OverUnder(ou) => {
                assert_eq!(ou.kind, OverUnderKind::Overset);
                assert_eq!(ou.annotation.0.len(), 1);
            }
            other => panic!("expected overset, got {other:?}"),
        }
        // outside that context \to is the arrow symbol
        let list = parse(r"x\to y");
        assert!(matches!(
            &list.0[1],
            Node::Atom(a) if matches!(&a.nucleus, Nucleus::Symbol(s) if s == "to")
        ));
    }

    #[test]
    fn sideset_parses_pre_and_post() {
        let list = parse(r"\sideset{_a^b}\and{_c^d}\to{\sum}");
        assert!(matches!(&list.0[0], Node::SideSet(_)));
    }

    #[test]
    fn unknown_commands_are_reported_with_name() {
        let err = parse_expression(r"\foldedtext{x}").unwrap_err();
        match err {
            ParseError::UnknownCommand { name, .. } => assert_eq!(name, "foldedtext"),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn environment_mismatch() {
        let err = parse_expression(r"\align x&=y\endgather").unwrap_err();
        assert!(matches!(err, ParseError::EnvironmentMismatch { .. }));
    }

    #[test]
    fn unbalanced_group() {
        assert!(matches!(
            parse_expression(r"{x"),
            Err(ParseError::UnbalancedGroup { .. })
        ));
        assert!(matches!(
            parse_expression(r"x}"),
            Err(ParseError::UnbalancedGroup { .. })
        ));
    }

    #[test]
    fn misplaced_align_tab() {
        assert!(matches!(
            parse_expression(r"x & y"),
            Err(ParseError::MisplacedAlignTab { .. })
        ));
    }

    #[test]
    fn scripts_attach_and_double_script_errors() {
        let list = parse("x_1^2");
        match &list.0[0] {
            Node::Atom(a) => {
                assert!(a.sup.is_some() && a.sub.is_some());
            }
            other => panic!("expected atom, got {other:?}"),
        }
        assert!(matches!(
            parse_expression("x^1^2"),
            Err(ParseError::DoubleScript { .. })
        ));
    }

    #[test]
    fn align_rows_and_tags() {
        let list = parse(r"\align x &= y \tag 1\\ u &= v \endalign");
        match &list.0[0] {
            Node::DisplayEnv(env) => {
                assert_eq!(env.kind, DisplayKind::Align);
                assert_eq!(env.rows.len(), 2);
                match &env.rows[0] {
                    DisplayRow::Eq { cells, tag, .. } => {
                        assert_eq!(cells.len(), 2);
                        assert_eq!(tag.as_ref(), Some(&TagContent::Text("1".into())));
                    }
                    other => panic!("unexpected row {other:?}"),
                }
            }
            other => panic!("expected display env, got {other:?}"),
        }
    }

    #[test]
    fn literal_tag_form() {
        let list = parse(r#"\gather x \tag"3'a" \endgather"#);
        match &list.0[0] {
            Node::DisplayEnv(env) => match &env.rows[0] {
                DisplayRow::Eq { tag, .. } => {
                    assert_eq!(tag.as_ref(), Some(&TagContent::Literal("3'a".into())));
                }
                other => panic!("unexpected row {other:?}"),
            },
            other => panic!("expected display env, got {other:?}"),
        }
    }

    #[test]
    fn bare_display_tag_becomes_plain_display() {
        let list = parse(r"E=mc^2 \tag 7");
        match &list.0[0] {
            Node::DisplayEnv(env) => {
                assert_eq!(env.kind, DisplayKind::Plain);
                assert_eq!(env.rows.len(), 1);
            }
            other => panic!("expected display env, got {other:?}"),
        }
    }

    #[test]
    fn matrix_with_format_and_hdotsfor() {
        let list = parse(r"\matrix\format\l&\quad\r\\ a&b\\ \hdotsfor{2}\endmatrix");
        match &list.0[0] {
            Node::Table(t) => {
                let fmt = t.format.as_ref().expect("format");
                assert_eq!(fmt.len(), 2);
                assert_eq!(fmt[0].align, ColumnAlign::Left);
                assert_eq!(fmt[1].align, ColumnAlign::Right);
                assert_eq!(fmt[1].pre_space, vec![SpaceCommand::Quad]);
                assert_eq!(t.rows.len(), 2);
                assert!(matches!(
                    t.rows[1].cells[0],
                    Cell::HdotsFor { span: 2, .. }
                ));
            }
            other => panic!("expected table, got {other:?}"),
        }
    }

    #[test]
    fn tab_is_alignment_only_inside_matrices() {
        let list = parse("\\matrix a\tb\\\\c\td\\endmatrix");
        match &list.0[0] {
            Node::Table(t) => {
                assert_eq!(t.rows.len(), 2);
                assert_eq!(t.rows[0].cells.len(), 2);
            }
            other => panic!("expected table, got {other:?}"),
        }
        // outside a matrix, a tab is just a space
        let list = parse("a\tb");
        assert_eq!(list.0.len(), 2);
    }

    #[test]
    fn cd_grid_emulates_column_skips() {
        let list = parse(r"\CD A @>f>> B\\ @VgVV @VVhV\\ C @>>k> D\endCD");
        match &list.0[0] {
            Node::Table(t) => {
                assert_eq!(t.kind, TableKind::CD);
                assert_eq!(t.rows.len(), 3);
                assert_eq!(t.rows[0].cells.len(), 3); // A, arrow, B
                assert_eq!(t.rows[1].cells.len(), 4); // v, skip, v, skip
            }
            other => panic!("expected CD table, got {other:?}"),
        }
    }

    #[test]
    fn dots_hints_and_decisions_at_parse_time() {
        use crate::dots::DotsKind;
        let list = parse(r"x\dots +");
        match &list.0[1] {
            Node::Dots(d) => assert_eq!(d.decision.kind, DotsKind::Centered),
            other => panic!("expected dots, got {other:?}"),
        }
        let list = parse(r"x\dots ,");
        match &list.0[1] {
            Node::Dots(d) => {
                assert_eq!(d.decision.kind, DotsKind::Low);
                assert!(!d.decision.trailing_thin);
            }
            other => panic!("expected dots, got {other:?}"),
        }
    }

    #[test]
    fn config_commands_collect() {
        let (_, config) = parse_expression(r"\TagsOnRight\LimitsOnInts x").unwrap();
        assert_eq!(config.tags_side, Some(crate::config::TagsSide::Right));
        assert_eq!(config.limits.ints, LimitsDefault::DisplayLimits);
    }

    #[test]
    fn canonical_roundtrip_is_idempotent() {
        let cases = [
            r"\dfrac{1}{2}+x_1^2",
            r"\root\leftroot{-2}\uproot{2}\beta\of{k}",
            r"\binom{n}{k}\cdot\sqrt{x+y}",
            r"\overset{a}\to{=}",
            r"\matrix a&b\\c&d\endmatrix",
            r"\align x&=y\\u&=v\endalign",
            r"\CD A @>f>> B\endCD",
            r"\sum_{i}^{n}\limits",
            r"x\sphat",
            r"\operatorname{Hom}(x)",
            r"\text{rank of }A",
            r"\Bbb{R}\Cal{F}",
            r"\cases x&\text{if }y\\z&\text{else}\endcases",
        ];
        for case in cases {
            let (ast1, _) = parse_expression(case).expect(case);
            let canon = ast1.canonical();
            let (ast2, _) = parse_expression(&canon)
                .unwrap_or_else(|e| panic!("reparse of `{canon}` failed: {e}"));
            assert_eq!(ast1, ast2, "case `{case}` canonical `{canon}`");
        }
    }
}
