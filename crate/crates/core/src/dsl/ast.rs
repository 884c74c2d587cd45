use std::fmt;

/// Byte range in the source text. Spans never take part in equality, so
/// ASTs compare structurally.
#[derive(Debug, Clone, Copy, Default, Eq)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl PartialEq for Span {
    fn eq(&self, _: &Span) -> bool {
        true
    }
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        Span { start, end }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AtomKind {
    C,
    D,
    Q,
    QD,
    S,
    A,
    SL,
    GL,
    PSL,
}

impl AtomKind {
    pub fn parse(s: &str) -> Option<AtomKind> {
        Some(match s {
            "C" => AtomKind::C,
            "D" => AtomKind::D,
            "Q" => AtomKind::Q,
            "QD" => AtomKind::QD,
            "S" => AtomKind::S,
            "A" => AtomKind::A,
            "SL" => AtomKind::SL,
            "GL" => AtomKind::GL,
            "PSL" => AtomKind::PSL,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            AtomKind::C => "C",
            AtomKind::D => "D",
            AtomKind::Q => "Q",
            AtomKind::QD => "QD",
            AtomKind::S => "S",
            AtomKind::A => "A",
            AtomKind::SL => "SL",
            AtomKind::GL => "GL",
            AtomKind::PSL => "PSL",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            AtomKind::SL | AtomKind::GL | AtomKind::PSL => 2,
            _ => 1,
        }
    }
}

/// A word in the generators of the normal part: `(generator, exponent)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Word(pub Vec<(usize, i64)>);

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ActionClause {
    /// Images of normal generators; unlisted generators are fixed.
    Act(Vec<(usize, Word)>),
    /// Row `i` is the image of generator `i`: `gᵢ ↦ Πⱼ gⱼ^{M[i][j]}`.
    Mat(Vec<Vec<i64>>),
}

/// One clause per generator of the acting group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionSpec {
    pub clauses: Vec<ActionClause>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Construction {
    Atom {
        kind: AtomKind,
        params: Vec<u64>,
        span: Span,
    },
    Power {
        base: Box<Construction>,
        exponent: u32,
        span: Span,
    },
    Direct {
        factors: Vec<Construction>,
        span: Span,
    },
    Semidirect {
        normal: Box<Construction>,
        actor: Box<Construction>,
        action: ActionSpec,
        span: Span,
    },
    /// Generators as cycle lists with 1-based points.
    Perms {
        degree: usize,
        generators: Vec<Vec<Vec<usize>>>,
        span: Span,
    },
}

impl Construction {
    pub fn span(&self) -> Span {
        match self {
            Construction::Atom { span, .. }
            | Construction::Power { span, .. }
            | Construction::Direct { span, .. }
            | Construction::Semidirect { span, .. }
            | Construction::Perms { span, .. } => *span,
        }
    }

    pub fn atom(kind: AtomKind, params: &[u64]) -> Self {
        Construction::Atom {
            kind,
            params: params.to_vec(),
            span: Span::default(),
        }
    }

    pub fn power(base: Construction, exponent: u32) -> Self {
        Construction::Power {
            base: Box::new(base),
            exponent,
            span: Span::default(),
        }
    }

    pub fn direct(factors: Vec<Construction>) -> Self {
        Construction::Direct {
            factors,
            span: Span::default(),
        }
    }

    pub fn semidirect(normal: Construction, actor: Construction, clauses: Vec<ActionClause>) -> Self {
        Construction::Semidirect {
            normal: Box::new(normal),
            actor: Box::new(actor),
            action: ActionSpec {
                clauses,
                span: Span::default(),
            },
            span: Span::default(),
        }
    }

    fn is_unit(&self) -> bool {
        matches!(self, Construction::Atom { .. } | Construction::Perms { .. })
    }
}

pub(crate) fn generator_name(i: usize) -> char {
    (b'a' + i as u8) as char
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (k, &(g, e)) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", generator_name(g))?;
            if e != 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for ActionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, clause) in self.clauses.iter().enumerate() {
            if k > 0 {
                write!(f, "; ")?;
            }
            match clause {
                ActionClause::Act(maps) => {
                    write!(f, "act")?;
                    for (j, (g, w)) in maps.iter().enumerate() {
                        let sep = if j == 0 { " " } else { ", " };
                        write!(f, "{sep}{} -> {w}", generator_name(*g))?;
                    }
                }
                ActionClause::Mat(rows) => {
                    write!(f, "mat")?;
                    let digits = rows.iter().flatten().all(|&v| (0..=9).contains(&v));
                    for row in rows {
                        if digits {
                            let s: String = row.iter().map(|v| v.to_string()).collect();
                            write!(f, " {s}")?;
                        } else {
                            let s: Vec<String> = row.iter().map(|v| v.to_string()).collect();
                            write!(f, " {}", s.join(","))?;
                        }
                    }
                }
            }
        }
        write!(f, "]")
    }
}

struct Unit<'a>(&'a Construction);

impl fmt::Display for Unit<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_unit() {
            write!(f, "{}", self.0)
        } else {
            write!(f, "({})", self.0)
        }
    }
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Construction::Atom { kind, params, .. } => {
                let ps: Vec<String> = params.iter().map(u64::to_string).collect();
                write!(f, "{}({})", kind.name(), ps.join(","))
            }
            Construction::Power { base, exponent, .. } => {
                write!(f, "{}^{exponent}", Unit(base))
            }
            Construction::Direct { factors, .. } => {
                for (k, factor) in factors.iter().enumerate() {
                    if k > 0 {
                        write!(f, " x ")?;
                    }
                    match factor {
                        Construction::Direct { .. } => write!(f, "{}", Unit(factor))?,
                        _ => write!(f, "{factor}")?,
                    }
                }
                Ok(())
            }
            Construction::Semidirect {
                normal,
                actor,
                action,
                ..
            } => {
                match **normal {
                    Construction::Direct { .. } => write!(f, "{}", Unit(normal))?,
                    _ => write!(f, "{normal}")?,
                }
                let actor_text = match **actor {
                    Construction::Direct { .. } | Construction::Semidirect { .. } => {
                        Unit(actor).to_string()
                    }
                    _ => actor.to_string(),
                };
                write!(f, " : {actor_text} {action}")
            }
            Construction::Perms { generators, .. } => {
                write!(f, "perm[")?;
                for (k, gen) in generators.iter().enumerate() {
                    if k > 0 {
                        write!(f, "; ")?;
                    }
                    if gen.is_empty() {
                        write!(f, "()")?;
                    }
                    for cycle in gen {
                        let ps: Vec<String> = cycle.iter().map(usize::to_string).collect();
                        write!(f, "({})", ps.join(","))?;
                    }
                }
                write!(f, "]")
            }
        }
    }
}
