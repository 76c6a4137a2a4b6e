//! The parsed math AST and its canonical text form.
//!
//! `canonical()` writes a normalized source text whose re-parse yields an
//! identical tree; the round-trip property is checked over the golden
//! corpus.

use std::fmt::Write as _;

use crate::dots::{DotsDecision, DotsHint};
use crate::style::StyleLevel;
use crate::symbols::AtomClass;

#[derive(Debug, Clone, PartialEq, Default)]
pub struct MathList(pub Vec<Node>);

impl MathList {
    pub fn new(nodes: Vec<Node>) -> MathList {
        MathList(nodes)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn canonical(&self) -> String {
        let mut out = String::new();
        for node in &self.0 {
            node.write_canonical(&mut out);
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Atom(Atom),
    Fraction(Fraction),
    ContinuedFraction(ContinuedFraction),
    Radical(Radical),
    Accent(Accent),
    Table(Table),
    DisplayEnv(DisplayEnv),
    Arrow(Arrow),
    Decoration(Decoration),
    OverUnder(OverUnder),
    SideSet(SideSet),
    ModOp(ModOp),
    Dots(DotsNode),
    MultInt(MultInt),
    Fenced(Fenced),
    BigDelim(BigDelim),
    Space(SpaceCommand),
    Style(StyleLevel),
    FontVariant(FontVariant),
    Penalty(PenaltyKind),
    Strut,
    MathStrut,
    Text(String),
    /// A bare `\tag` in a plain display, hoisted into a one-row display
    /// before the parse result is returned.
    PendingTag(Box<TagContent>),
}

/// A `\Cal`/`\bold`/`\Bbb`-style alphabet switch over a group.
#[derive(Debug, Clone, PartialEq)]
pub struct FontVariant {
    pub variant: crate::symbols::Variant,
    pub body: MathList,
}

/// What an atom's nucleus holds.
#[derive(Debug, Clone, PartialEq)]
pub enum Nucleus {
    /// A raw character (letter, digit, punctuation).
    Char(char),
    /// A registry symbol, by name.
    Symbol(String),
    /// A braced group.
    List(MathList),
    /// An upright operator name (`\sin`, `\operatorname{..}`).
    OpName {
        text: String,
        name: Option<String>,
        with_limits: bool,
    },
    /// `\varinjlim` and friends: "lim" over an extensible arrow.
    VarLim(VarLimKind),
    Empty,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarLimKind {
    Inj,
    Proj,
    LimInf,
    LimSup,
}

impl VarLimKind {
    pub fn command(self) -> &'static str {
        match self {
            VarLimKind::Inj => "varinjlim",
            VarLimKind::Proj => "varprojlim",
            VarLimKind::LimInf => "varliminf",
            VarLimKind::LimSup => "varlimsup",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitsRequest {
    Auto,
    Limits,
    NoLimits,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Atom {
    pub class: AtomClass,
    pub nucleus: Nucleus,
    pub sup: Option<MathList>,
    pub sub: Option<MathList>,
    pub limits: LimitsRequest,
    /// Rows of a `\Sp` multiline superscript.
    pub multi_sup: Option<Vec<MathList>>,
    /// Rows of a `\Sb` multiline subscript.
    pub multi_sub: Option<Vec<MathList>>,
}

impl Atom {
    pub fn new(class: AtomClass, nucleus: Nucleus) -> Atom {
        Atom {
            class,
            nucleus,
            sup: None,
            sub: None,
            limits: LimitsRequest::Auto,
            multi_sup: None,
            multi_sub: None,
        }
    }

    pub fn has_scripts(&self) -> bool {
        self.sup.is_some()
            || self.sub.is_some()
            || self.multi_sup.is_some()
            || self.multi_sub.is_some()
    }
}

/// Fraction rule thickness selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FracThickness {
    /// The font's rule thickness.
    Default,
    /// A multiple of the `ex` constant, in thousandths.
    ExMilli(i64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Delim {
    Char(char),
    Symbol(&'static str),
    Null,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Fraction {
    pub num: MathList,
    pub den: MathList,
    pub thickness: FracThickness,
    pub delims: Option<(Delim, Delim)>,
    pub style_force: Option<StyleLevel>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CfracAlign {
    Center,
    Left,
    Right,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContinuedFraction {
    pub rows: Vec<MathList>,
    pub align: CfracAlign,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Radical {
    pub radicand: MathList,
    pub degree: Option<MathList>,
    /// `\uproot`/`\leftroot` adjustments in integer mu.
    pub uproot: i64,
    pub leftroot: i64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Accent {
    pub base: MathList,
    /// Accent command name (`hat`, `widehat`, `vec`, ...).
    pub slot: String,
    /// Capitalized forms take the skew-exact path for stacked accents.
    pub exact: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VPos {
    Top,
    Center,
    Bottom,
}

#[derive(Debug, Clone, PartialEq)]
pub enum TableKind {
    Matrix { delims: Option<(Delim, Delim)> },
    SmallMatrix,
    Cases,
    Aligned(VPos),
    AlignedAt { pairs: usize },
    Gathered,
    CD,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColumnAlign {
    Left,
    Center,
    Right,
}

/// One `\format` column: alignment plus any spacing commands written before
/// the cell in the format row.
#[derive(Debug, Clone, PartialEq)]
pub struct ColumnSpec {
    pub align: ColumnAlign,
    pub pre_space: Vec<SpaceCommand>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Math(MathList),
    /// `\hdotsfor`: leaders spanning `span` columns; multiplier is in
    /// thousandths. The inner form typesets `after` before the leaders.
    HdotsFor {
        multiplier_milli: i64,
        span: usize,
        after: Option<MathList>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct TableRow {
    pub cells: Vec<Cell>,
    /// `\vspace{..}` written after the row separator, raw dimension text.
    pub vspace: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub kind: TableKind,
    pub rows: Vec<TableRow>,
    pub format: Option<Vec<ColumnSpec>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DisplayKind {
    Plain,
    Align,
    Gather,
    Alignat { pairs: usize, spread: AlignatSpread },
    Split,
    Multline,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlignatSpread {
    None,
    X,
    XX,
}

#[derive(Debug, Clone, PartialEq)]
pub enum TagContent {
    /// `\tag"..."`: the raw text stands alone.
    Literal(String),
    /// Ordinary text tag, wrapped in upright parentheses.
    Text(String),
    /// Math-mode tag (when math tags are allowed), still parenthesized.
    Math(MathList),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowBreak {
    Allow,
    Force,
}

#[derive(Debug, Clone, PartialEq)]
pub enum DisplayRow {
    Eq {
        cells: Vec<MathList>,
        tag: Option<TagContent>,
        shove: Option<ColumnAlign>,
        break_after: Option<RowBreak>,
    },
    Intertext(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct DisplayEnv {
    pub kind: DisplayKind,
    pub rows: Vec<DisplayRow>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArrowDir {
    Right,
    Left,
    Up,
    Down,
    Equals,
    VertLine,
    Blank,
}

/// An extensible arrow; for vertical arrows `top`/`bottom` hold the left and
/// right labels.
#[derive(Debug, Clone, PartialEq)]
pub struct Arrow {
    pub dir: ArrowDir,
    pub top: MathList,
    pub bottom: MathList,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecorationKind {
    Boxed,
    Pmb,
    Smash,
    TopSmash,
    BotSmash,
    PretendWidth,
    Shave,
    TopShave,
    BotShave,
    Underline,
    Overline,
    VPhantom,
    HPhantom,
    Phantom,
    Dddot,
    Ddddot,
    SpHat,
    SpCheck,
    SpTilde,
    SpAcute,
    SpGrave,
    SpDot,
    SpDdot,
    SpDddot,
    SpDdddot,
    SpBreve,
    SpBar,
    SpVec,
}

impl DecorationKind {
    pub fn command(self) -> &'static str {
        match self {
            DecorationKind::Boxed => "boxed",
            DecorationKind::Pmb => "pmb",
            DecorationKind::Smash => "smash",
            DecorationKind::TopSmash => "topsmash",
            DecorationKind::BotSmash => "botsmash",
            DecorationKind::PretendWidth => "pretend",
            DecorationKind::Shave => "shave",
            DecorationKind::TopShave => "topshave",
            DecorationKind::BotShave => "botshave",
            DecorationKind::Underline => "underline",
            DecorationKind::Overline => "overline",
            DecorationKind::VPhantom => "vphantom",
            DecorationKind::HPhantom => "hphantom",
            DecorationKind::Phantom => "phantom",
            DecorationKind::Dddot => "dddot",
            DecorationKind::Ddddot => "ddddot",
            DecorationKind::SpHat => "sphat",
            DecorationKind::SpCheck => "spcheck",
            DecorationKind::SpTilde => "sptilde",
            DecorationKind::SpAcute => "spacute",
            DecorationKind::SpGrave => "spgrave",
            DecorationKind::SpDot => "spdot",
            DecorationKind::SpDdot => "spddot",
            DecorationKind::SpDddot => "spdddot",
            DecorationKind::SpDdddot => "spddddot",
            DecorationKind::SpBreve => "spbreve",
            DecorationKind::SpBar => "spbar",
            DecorationKind::SpVec => "spvec",
        }
    }

    pub fn is_postfix(self) -> bool {
        matches!(
            self,
            DecorationKind::SpHat
                | DecorationKind::SpCheck
                | DecorationKind::SpTilde
                | DecorationKind::SpAcute
                | DecorationKind::SpGrave
                | DecorationKind::SpDot
                | DecorationKind::SpDdot
                | DecorationKind::SpDddot
                | DecorationKind::SpDdddot
                | DecorationKind::SpBreve
                | DecorationKind::SpBar
                | DecorationKind::SpVec
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Decoration {
    pub kind: DecorationKind,
    pub body: MathList,
    /// The width reference of `\pretend..\haswidth{..}`.
    pub reference: Option<MathList>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OverUnderKind {
    Overset,
    Underset,
    OversetBrace,
    UndersetBrace,
    OverRightArrow,
    OverLeftArrow,
    OverLeftRightArrow,
    UnderRightArrow,
    UnderLeftArrow,
    UnderLeftRightArrow,
}

impl OverUnderKind {
    pub fn is_over(self) -> bool {
        matches!(
            self,
            OverUnderKind::Overset
                | OverUnderKind::OversetBrace
                | OverUnderKind::OverRightArrow
                | OverUnderKind::OverLeftArrow
                | OverUnderKind::OverLeftRightArrow
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OverUnder {
    pub kind: OverUnderKind,
    pub base: MathList,
    /// Empty for the arrow forms (the arrow itself is the annotation).
    pub annotation: MathList,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SideSet {
    pub pre: MathList,
    pub post: MathList,
    pub base: MathList,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModKind {
    Mod,
    Bmod,
    Pmod,
    Pod,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModOp {
    pub kind: ModKind,
    pub arg: Option<MathList>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DotsNode {
    pub hint: DotsHint,
    pub decision: DotsDecision,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MultIntKind {
    IInt,
    IIInt,
    IIIInt,
    IDotsInt,
}

impl MultIntKind {
    pub fn command(self) -> &'static str {
        match self {
            MultIntKind::IInt => "iint",
            MultIntKind::IIInt => "iiint",
            MultIntKind::IIIInt => "iiiint",
            MultIntKind::IDotsInt => "idotsint",
        }
    }

    pub fn count(self) -> usize {
        match self {
            MultIntKind::IInt => 2,
            MultIntKind::IIInt => 3,
            MultIntKind::IIIInt => 4,
            MultIntKind::IDotsInt => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultInt {
    pub kind: MultIntKind,
    pub limits: LimitsRequest,
    pub sup: Option<MathList>,
    pub sub: Option<MathList>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Fenced {
    pub left: Delim,
    pub right: Delim,
    pub body: MathList,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BigDelim {
    /// 1 = big, 2 = Big, 3 = bigg, 4 = Bigg.
    pub size: u8,
    pub delim: Delim,
    pub class: AtomClass,
    pub command: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpaceCommand {
    Thin,
    NegThin,
    Med,
    NegMed,
    Thick,
    NegThick,
    AtComma,
    AtBang,
    Colon,
    Quad,
    QQuad,
}

impl SpaceCommand {
    pub fn command(self) -> &'static str {
        match self {
            SpaceCommand::Thin => "\\,",
            SpaceCommand::NegThin => "\\!",
            SpaceCommand::Med => "\\medspace",
            SpaceCommand::NegMed => "\\negmedspace",
            SpaceCommand::Thick => "\\;",
            SpaceCommand::NegThick => "\\negthickspace",
            SpaceCommand::AtComma => "@,",
            SpaceCommand::AtBang => "@!",
            SpaceCommand::Colon => "\\:",
            SpaceCommand::Quad => "\\quad ",
            SpaceCommand::QQuad => "\\qquad ",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PenaltyKind {
    MathBreak,
    NoMathBreak,
    AllowMathBreak,
}

impl PenaltyKind {
    pub fn command(self) -> &'static str {
        match self {
            PenaltyKind::MathBreak => "mathbreak",
            PenaltyKind::NoMathBreak => "nomathbreak",
            PenaltyKind::AllowMathBreak => "allowmathbreak",
        }
    }

    pub fn value(self) -> i32 {
        match self {
            PenaltyKind::MathBreak => -10000,
            PenaltyKind::NoMathBreak => 10000,
            PenaltyKind::AllowMathBreak => 0,
        }
    }
}

// ---------------------------------------------------------------------
// Canonical serialization
// ---------------------------------------------------------------------

fn write_delim(out: &mut String, d: Delim) {
    match d {
        Delim::Char(c) => out.push(c),
        Delim::Symbol(s) => {
            let _ = write!(out, "\\{s} ");
        }
        Delim::Null => out.push('.'),
    }
}

fn write_group(out: &mut String, list: &MathList) {
    out.push('{');
    out.push_str(&list.canonical());
    out.push('}');
}

fn write_tag(out: &mut String, tag: &TagContent) {
    match tag {
        TagContent::Literal(text) => {
            let _ = write!(out, "\\tag\"{text}\"");
        }
        TagContent::Text(text) => {
            let _ = write!(out, "\\tag{{{text}}}");
        }
        TagContent::Math(list) => {
            let _ = write!(out, "\\tag{{{}}}", list.canonical());
        }
    }
}

fn write_rows(out: &mut String, rows: &[TableRow]) {
    for (i, row) in rows.iter().enumerate() {
        if i > 0 {
            out.push_str("\\\\");
            if let Some(v) = &row.vspace {
                let _ = write!(out, "\\vspace{{{v}}}");
            }
        }
        for (j, cell) in row.cells.iter().enumerate() {
            if j > 0 {
                out.push('&');
            }
            match cell {
                Cell::Math(list) => out.push_str(&list.canonical()),
                Cell::HdotsFor {
                    multiplier_milli,
                    span,
                    after,
                } => match (after, *multiplier_milli == 1000) {
                    (None, true) => {
                        let _ = write!(out, "\\hdotsfor{{{span}}}");
                    }
                    (None, false) => {
                        let _ = write!(
                            out,
                            "\\spacehdots{{{}}}\\for{{{span}}}",
                            milli_to_text(*multiplier_milli)
                        );
                    }
                    (Some(a), true) => {
                        let _ = write!(
                            out,
                            "\\innerhdotsfor{{{span}}}\\after{{{}}}",
                            a.canonical()
                        );
                    }
                    (Some(a), false) => {
                        let _ = write!(
                            out,
                            "\\spaceinnerhdots{{{}}}\\for{{{span}}}\\after{{{}}}",
                            milli_to_text(*multiplier_milli),
                            a.canonical()
                        );
                    }
                },
            }
        }
    }
}

/// Reconstructs diagram rows: arrows carry their own syntax and the skip
/// cells they emitted are implicit, so no `&` separators appear.
fn write_cd_rows(out: &mut String, rows: &[TableRow]) {
    for (i, row) in rows.iter().enumerate() {
        if i > 0 {
            out.push_str("\\\\");
        }
        let mut skip_next = false;
        for cell in &row.cells {
            let Cell::Math(list) = cell else { continue };
            if skip_next {
                skip_next = false;
                if list.is_empty() {
                    continue;
                }
            }
            if list.is_empty() {
                out.push_str("@.");
                skip_next = true;
                continue;
            }
            out.push_str(&list.canonical());
            if matches!(
                list.0.last(),
                Some(Node::Arrow(Arrow {
                    dir: ArrowDir::Up | ArrowDir::Down | ArrowDir::VertLine,
                    ..
                }))
            ) {
                skip_next = true;
            }
        }
    }
}

fn milli_to_text(milli: i64) -> String {
    if milli % 1000 == 0 {
        format!("{}", milli / 1000)
    } else {
        let mut s = format!("{}.{:03}", milli / 1000, milli % 1000);
        while s.ends_with('0') {
            s.pop();
        }
        s
    }
}

impl Node {
    pub fn write_canonical(&self, out: &mut String) {
        match self {
            Node::Atom(a) => {
                match &a.nucleus {
                    Nucleus::Char(c) => out.push(*c),
                    Nucleus::Symbol(name) => {
                        let _ = write!(out, "\\{name} ");
                    }
                    Nucleus::List(list) => write_group(out, list),
                    Nucleus::OpName {
                        text,
                        name,
                        with_limits,
                    } => match name {
                        Some(n) => {
                            let _ = write!(out, "\\{n} ");
                        }
                        None if *with_limits => {
                            let _ = write!(out, "\\operatornamewithlimits{{{text}}}");
                        }
                        None => {
                            let _ = write!(out, "\\operatorname{{{text}}}");
                        }
                    },
                    Nucleus::VarLim(kind) => {
                        let _ = write!(out, "\\{} ", kind.command());
                    }
                    Nucleus::Empty => out.push_str("{}"),
                }
                match a.limits {
                    LimitsRequest::Limits => out.push_str("\\limits "),
                    LimitsRequest::NoLimits => out.push_str("\\nolimits "),
                    LimitsRequest::Auto => {}
                }
                if let Some(sup) = &a.sup {
                    out.push('^');
                    write_group(out, sup);
                }
                if let Some(sub) = &a.sub {
                    out.push('_');
                    write_group(out, sub);
                }
                if let Some(rows) = &a.multi_sup {
                    out.push_str("\\Sp ");
                    for (i, r) in rows.iter().enumerate() {
                        if i > 0 {
                            out.push_str("\\\\");
                        }
                        out.push_str(&r.canonical());
                    }
                    out.push_str("\\endSp ");
                }
                if let Some(rows) = &a.multi_sub {
                    out.push_str("\\Sb ");
                    for (i, r) in rows.iter().enumerate() {
                        if i > 0 {
                            out.push_str("\\\\");
                        }
                        out.push_str(&r.canonical());
                    }
                    out.push_str("\\endSb ");
                }
            }
            Node::Fraction(f) => {
                match (&f.thickness, &f.delims, &f.style_force) {
                    (FracThickness::Default, None, None) => out.push_str("\\frac"),
                    (FracThickness::Default, None, Some(StyleLevel::Display)) => {
                        out.push_str("\\dfrac")
                    }
                    (FracThickness::Default, None, Some(_)) => out.push_str("\\tfrac"),
                    (FracThickness::ExMilli(0), Some((Delim::Char('('), Delim::Char(')'))), None) => {
                        out.push_str("\\binom")
                    }
                    (
                        FracThickness::ExMilli(0),
                        Some((Delim::Char('('), Delim::Char(')'))),
                        Some(StyleLevel::Display),
                    ) => out.push_str("\\dbinom"),
                    (
                        FracThickness::ExMilli(0),
                        Some((Delim::Char('('), Delim::Char(')'))),
                        Some(_),
                    ) => out.push_str("\\tbinom"),
                    (FracThickness::ExMilli(m), None, _) => {
                        let _ = write!(out, "\\thickfrac\\thickness{} ", milli_to_text(*m));
                    }
                    (FracThickness::ExMilli(m), Some((l, r)), _) => {
                        out.push_str("\\thickfracwithdelims");
                        write_delim(out, *l);
                        write_delim(out, *r);
                        let _ = write!(out, "\\thickness{} ", milli_to_text(*m));
                    }
                    (FracThickness::Default, Some((l, r)), _) => {
                        out.push_str("\\fracwithdelims");
                        write_delim(out, *l);
                        write_delim(out, *r);
                    }
                }
                write_group(out, &f.num);
                write_group(out, &f.den);
            }
            Node::ContinuedFraction(c) => {
                out.push_str(match c.align {
                    CfracAlign::Center => "\\cfrac ",
                    CfracAlign::Left => "\\lcfrac ",
                    CfracAlign::Right => "\\rcfrac ",
                });
                for (i, row) in c.rows.iter().enumerate() {
                    if i > 0 {
                        out.push_str("\\\\");
                    }
                    out.push_str(&row.canonical());
                }
                out.push_str("\\endcfrac ");
            }
            Node::Radical(r) => {
                if r.degree.is_none() && r.uproot == 0 && r.leftroot == 0 {
                    out.push_str("\\sqrt");
                    write_group(out, &r.radicand);
                } else {
                    out.push_str("\\root");
                    if r.uproot != 0 {
                        let _ = write!(out, "\\uproot{{{}}}", r.uproot);
                    }
                    if r.leftroot != 0 {
                        let _ = write!(out, "\\leftroot{{{}}}", r.leftroot);
                    }
                    if let Some(d) = &r.degree {
                        out.push_str(&d.canonical());
                    }
                    out.push_str("\\of");
                    write_group(out, &r.radicand);
                }
            }
            Node::Accent(a) => {
                let name = if a.exact {
                    let mut n = a.slot.clone();
                    if let Some(first) = n.get_mut(0..1) {
                        first.make_ascii_uppercase();
                    }
                    n
                } else {
                    a.slot.clone()
                };
                let _ = write!(out, "\\{name}");
                write_group(out, &a.base);
            }
            Node::Table(t) => {
                let (open, close) = match &t.kind {
                    TableKind::Matrix { delims: None } => ("\\matrix ", "\\endmatrix "),
                    TableKind::Matrix {
                        delims: Some((l, _)),
                    } => match l {
                        Delim::Char('(') => ("\\pmatrix ", "\\endpmatrix "),
                        Delim::Char('[') => ("\\bmatrix ", "\\endbmatrix "),
                        Delim::Char('|') => ("\\vmatrix ", "\\endvmatrix "),
                        _ => ("\\Vmatrix ", "\\endVmatrix "),
                    },
                    TableKind::SmallMatrix => ("\\smallmatrix ", "\\endsmallmatrix "),
                    TableKind::Cases => ("\\cases ", "\\endcases "),
                    TableKind::Aligned(VPos::Center) => ("\\aligned ", "\\endaligned "),
                    TableKind::Aligned(VPos::Top) => ("\\topaligned ", "\\endtopaligned "),
                    TableKind::Aligned(VPos::Bottom) => ("\\botaligned ", "\\endbotaligned "),
                    TableKind::AlignedAt { pairs } => {
                        let _ = write!(out, "\\alignedat{{{pairs}}}");
                        ("", "\\endalignedat ")
                    }
                    TableKind::Gathered => ("\\gathered ", "\\endgathered "),
                    TableKind::CD => ("\\CD ", "\\endCD "),
                };
                out.push_str(open);
                if t.kind == TableKind::CD {
                    write_cd_rows(out, &t.rows);
                    out.push_str(close);
                    return;
                }
                if let Some(format) = &t.format {
                    out.push_str("\\format");
                    for (i, col) in format.iter().enumerate() {
                        if i > 0 {
                            out.push('&');
                        }
                        for s in &col.pre_space {
                            out.push_str(s.command());
                        }
                        out.push_str(match col.align {
                            ColumnAlign::Left => "\\l",
                            ColumnAlign::Center => "\\c",
                            ColumnAlign::Right => "\\r",
                        });
                    }
                    out.push_str("\\\\");
                }
                write_rows(out, &t.rows);
                out.push_str(close);
            }
            Node::DisplayEnv(env) => {
                let (open, close) = match env.kind {
                    DisplayKind::Plain => ("", ""),
                    DisplayKind::Align => ("\\align ", "\\endalign "),
                    DisplayKind::Gather => ("\\gather ", "\\endgather "),
                    DisplayKind::Alignat {
                        pairs,
                        spread: AlignatSpread::None,
                    } => {
                        let _ = write!(out, "\\alignat{{{pairs}}}");
                        ("", "\\endalignat ")
                    }
                    DisplayKind::Alignat {
                        pairs,
                        spread: AlignatSpread::X,
                    } => {
                        let _ = write!(out, "\\xalignat{{{pairs}}}");
                        ("", "\\endxalignat ")
                    }
                    DisplayKind::Alignat {
                        pairs,
                        spread: AlignatSpread::XX,
                    } => {
                        let _ = write!(out, "\\xxalignat{{{pairs}}}");
                        ("", "\\endxxalignat ")
                    }
                    DisplayKind::Split => ("\\split ", "\\endsplit "),
                    DisplayKind::Multline => ("\\multline ", "\\endmultline "),
                };
                out.push_str(open);
                for (i, row) in env.rows.iter().enumerate() {
                    if i > 0 {
                        out.push_str("\\\\");
                    }
                    match row {
                        DisplayRow::Intertext(text) => {
                            let _ = write!(out, "\\intertext{{{text}}}");
                        }
                        DisplayRow::Eq {
                            cells,
                            tag,
                            shove,
                            break_after,
                        } => {
                            match shove {
                                Some(ColumnAlign::Left) => out.push_str("\\shoveleft"),
                                Some(ColumnAlign::Right) => out.push_str("\\shoveright"),
                                _ => {}
                            }
                            for (j, cell) in cells.iter().enumerate() {
                                if j > 0 {
                                    out.push('&');
                                }
                                out.push_str(&cell.canonical());
                            }
                            if let Some(tag) = tag {
                                write_tag(out, tag);
                            }
                            match break_after {
                                Some(RowBreak::Allow) => out.push_str("\\allowdisplaybreak "),
                                Some(RowBreak::Force) => out.push_str("\\displaybreak "),
                                None => {}
                            }
                        }
                    }
                }
                out.push_str(close);
            }
            Node::Arrow(a) => match a.dir {
                ArrowDir::Right => {
                    out.push_str("@>");
                    out.push_str(&a.top.canonical());
                    out.push('>');
                    out.push_str(&a.bottom.canonical());
                    out.push('>');
                }
                ArrowDir::Left => {
                    out.push_str("@<");
                    out.push_str(&a.top.canonical());
                    out.push('<');
                    out.push_str(&a.bottom.canonical());
                    out.push('<');
                }
                ArrowDir::Up => {
                    out.push_str("@A");
                    out.push_str(&a.top.canonical());
                    out.push('A');
                    out.push_str(&a.bottom.canonical());
                    out.push('A');
                }
                ArrowDir::Down => {
                    out.push_str("@V");
                    out.push_str(&a.top.canonical());
                    out.push('V');
                    out.push_str(&a.bottom.canonical());
                    out.push('V');
                }
                ArrowDir::Equals => out.push_str("@="),
                ArrowDir::VertLine => out.push_str("@|"),
                ArrowDir::Blank => out.push_str("@."),
            },
            Node::Decoration(d) => {
                if d.kind == DecorationKind::PretendWidth {
                    out.push_str("\\pretend");
                    out.push_str(&d.body.canonical());
                    out.push_str("\\haswidth");
                    if let Some(r) = &d.reference {
                        write_group(out, r);
                    }
                } else if d.kind.is_postfix() {
                    let _ = write!(out, "\\{} ", d.kind.command());
                } else {
                    let _ = write!(out, "\\{}", d.kind.command());
                    write_group(out, &d.body);
                }
            }
            Node::OverUnder(ou) => match ou.kind {
                OverUnderKind::Overset | OverUnderKind::Underset => {
                    let cmd = if ou.kind == OverUnderKind::Overset {
                        "overset"
                    } else {
                        "underset"
                    };
                    let _ = write!(out, "\\{cmd} ");
                    out.push_str(&ou.annotation.canonical());
                    out.push_str("\\to");
                    write_group(out, &ou.base);
                }
                OverUnderKind::OversetBrace | OverUnderKind::UndersetBrace => {
                    let cmd = if ou.kind == OverUnderKind::OversetBrace {
                        "oversetbrace"
                    } else {
                        "undersetbrace"
                    };
                    let _ = write!(out, "\\{cmd} ");
                    out.push_str(&ou.annotation.canonical());
                    out.push_str("\\to");
                    write_group(out, &ou.base);
                }
                _ => {
                    let cmd = match ou.kind {
                        OverUnderKind::OverRightArrow => "overrightarrow",
                        OverUnderKind::OverLeftArrow => "overleftarrow",
                        OverUnderKind::OverLeftRightArrow => "overleftrightarrow",
                        OverUnderKind::UnderRightArrow => "underrightarrow",
                        OverUnderKind::UnderLeftArrow => "underleftarrow",
                        _ => "underleftrightarrow",
                    };
                    let _ = write!(out, "\\{cmd}");
                    write_group(out, &ou.base);
                }
            },
            Node::SideSet(s) => {
                out.push_str("\\sideset ");
                out.push_str(&s.pre.canonical());
                out.push_str("\\and ");
                out.push_str(&s.post.canonical());
                out.push_str("\\to");
                write_group(out, &s.base);
            }
            Node::ModOp(m) => {
                let cmd = match m.kind {
                    ModKind::Mod => "mod",
                    ModKind::Bmod => "bmod",
                    ModKind::Pmod => "pmod",
                    ModKind::Pod => "pod",
                };
                let _ = write!(out, "\\{cmd} ");
                if let Some(arg) = &m.arg {
                    write_group(out, arg);
                }
            }
            Node::Dots(d) => {
                let _ = write!(out, "\\{} ", d.hint.command_name());
            }
            Node::MultInt(m) => {
                let _ = write!(out, "\\{} ", m.kind.command());
                match m.limits {
                    LimitsRequest::Limits => out.push_str("\\limits "),
                    LimitsRequest::NoLimits => out.push_str("\\nolimits "),
                    LimitsRequest::Auto => {}
                }
                if let Some(sup) = &m.sup {
                    out.push('^');
                    write_group(out, sup);
                }
                if let Some(sub) = &m.sub {
                    out.push('_');
                    write_group(out, sub);
                }
            }
            Node::Fenced(f) => {
                out.push_str("\\left");
                write_delim(out, f.left);
                out.push_str(&f.body.canonical());
                out.push_str("\\right");
                write_delim(out, f.right);
            }
            Node::BigDelim(b) => {
                let _ = write!(out, "\\{}", b.command);
                write_delim(out, b.delim);
            }
            Node::Space(s) => out.push_str(s.command()),
            Node::Style(level) => {
                out.push_str(match level {
                    StyleLevel::Display => "\\dsize ",
                    StyleLevel::Text => "\\tsize ",
                    StyleLevel::Script => "\\ssize ",
                    StyleLevel::ScriptScript => "\\sssize ",
                });
            }
            Node::FontVariant(v) => {
                let cmd = match v.variant {
                    crate::symbols::Variant::Cal => "Cal",
                    crate::symbols::Variant::Bold => "bold",
                    crate::symbols::Variant::Roman => "roman",
                    crate::symbols::Variant::Slanted => "slanted",
                    crate::symbols::Variant::Italic => "italic",
                    crate::symbols::Variant::Bbb => "Bbb",
                    _ => "roman",
                };
                let _ = write!(out, "\\{cmd}");
                write_group(out, &v.body);
            }
            Node::Penalty(p) => {
                let _ = write!(out, "\\{} ", p.command());
            }
            Node::Strut => out.push_str("\\strut "),
            Node::MathStrut => out.push_str("\\mathstrut "),
            Node::Text(text) => {
                let _ = write!(out, "\\text{{{text}}}");
            }
            Node::PendingTag(tag) => write_tag(out, tag),
        }
    }
}
