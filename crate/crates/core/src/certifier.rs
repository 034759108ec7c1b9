//! Forward-chaining certifier for codimension-2 iso-contact embeddings into the
//! standard contact sphere. Every step cites one entry of [`RULE_TABLE`].

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::filling::{d3_connected_sum, d3_from_word, D3Value};
use crate::openbook::{HomologySummary, OpenBook};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertifyError {
    #[error("c1 undeclared and not derivable: H1(M) is nontrivial ({0}); add `contact c1=zero|nonzero`")]
    C1NotDerivable(String),
    #[error("descriptor has dimension {found}, expected {expected}")]
    DimensionMismatch { expected: u8, found: u8 },
    #[error("five-manifold must be simply connected")]
    NotSimplyConnected,
    #[error("five-manifold must be almost contact (W3 = 0)")]
    NotAlmostContact,
    #[error("M_k summands need k >= 2, got k = {0}")]
    BadMk(u64),
    #[error("S5 has H2 = 0, so c1 cannot be nonzero")]
    SphereWithNonzeroC1,
    #[error("unknown fact `{0}`")]
    UnknownFact(String),
    #[error("fact `{0}` is not allowed for this target")]
    FactForWrongTarget(String),
    #[error("conflicting facts: {0}")]
    ConflictingFacts(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum C1Status {
    DerivedZero,
    DeclaredZero,
    DeclaredNonzero,
}

impl C1Status {
    pub fn is_zero(self) -> bool {
        !matches!(self, C1Status::DeclaredNonzero)
    }

    pub fn token(self) -> &'static str {
        match self {
            C1Status::DerivedZero => "derived-zero",
            C1Status::DeclaredZero => "zero",
            C1Status::DeclaredNonzero => "nonzero",
        }
    }
}

/// What an input file says about `c1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum C1Declaration {
    #[default]
    Auto,
    Zero,
    Nonzero,
}

impl C1Declaration {
    pub fn token(self) -> &'static str {
        match self {
            C1Declaration::Auto => "auto",
            C1Declaration::Zero => "zero",
            C1Declaration::Nonzero => "nonzero",
        }
    }
}

impl FromStr for C1Declaration {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "auto" => Ok(C1Declaration::Auto),
            "zero" => Ok(C1Declaration::Zero),
            "nonzero" => Ok(C1Declaration::Nonzero),
            other => Err(format!("c1 must be zero, nonzero or auto, got `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClassTag {
    Standard,
    Overtwisted,
    StotSum,
    Unspecified,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContactDescriptor {
    pub dimension: u8,
    pub c1: C1Status,
    pub d3: Option<D3Value>,
    pub class_tag: ClassTag,
    pub notes: Vec<String>,
}

impl ContactDescriptor {
    pub fn three(c1: C1Status) -> Self {
        ContactDescriptor { dimension: 3, c1, d3: None, class_tag: ClassTag::Unspecified, notes: vec![] }
    }

    /// Connected sum with the standard overtwisted sphere, whose `d₃` is the
    /// configurable constant `d_stot`.
    pub fn with_stot_summand(&self, d_stot: D3Value) -> Self {
        let mut out = self.clone();
        out.class_tag = ClassTag::StotSum;
        out.d3 = self.d3.map(|d| d3_connected_sum(d, d_stot));
        out.notes.push(format!("d3 of the overtwisted sphere summand assumed to be D_STOT={d_stot}"));
        out
    }
}

/// `DerivedZero` when `H₁(M)` is trivial (so `H²(M;ℤ) = 0`) and nothing was declared.
pub fn derive_contact_invariants(
    ob: &OpenBook,
    declared: C1Declaration,
) -> Result<ContactDescriptor, CertifyError> {
    let h1 = ob.first_homology();
    let c1 = match declared {
        C1Declaration::Zero => C1Status::DeclaredZero,
        C1Declaration::Nonzero => C1Status::DeclaredNonzero,
        C1Declaration::Auto if h1.is_trivial() => C1Status::DerivedZero,
        C1Declaration::Auto => return Err(CertifyError::C1NotDerivable(h1.to_string())),
    };
    let mut desc = ContactDescriptor::three(c1);
    desc.d3 = d3_from_word(ob);
    Ok(desc)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleId {
    R1,
    R2,
    R3,
    R4,
    R5,
    R6,
    R7,
    R8,
    R9,
    R10,
    F1,
    F2,
    B1,
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// Audited citation for every rule the engine may fire.
pub const RULE_TABLE: &[(RuleId, &str)] = &[
    (RuleId::R1, "Kasuya obstruction: c1(xi) = 0 is necessary for an iso-contact embedding in the standard contact sphere two dimensions up"),
    (RuleId::R2, "Thm 1.3(1): if H2(M;Z) has no 2-torsion, (M, xi) embeds in (S5, xi_std) iff c1(xi) = 0"),
    (RuleId::R3, "Thm 1.3(2): if H2(M;Z) has 2-torsion, structures homotopic over the 2-skeleton to a distinguished plane-field class [xi] embed in (S5, xi_std)"),
    (RuleId::R4, "Thm 1.5: a closed simply connected contact 5-manifold with w2 = 0 embeds in (S7, xi_std) iff c1(xi) = 0"),
    (RuleId::R5, "Prop 5.1: S5 has a unique almost-contact class, so every contact structure on S5 embeds in (S7, xi_std)"),
    (RuleId::R6, "Lemma 5.2: (S2 x S3, xi) embeds in (S7, xi_std) iff c1(xi) = 0"),
    (RuleId::R7, "Prop 1.2: a contact embedding whose induced structure is almost-contact homotopic to xi gives an iso-contact embedding"),
    (RuleId::R8, "Thm 1.1: an iso-contact embedding of xi^ot with trivial normal bundle gives one of xi"),
    (RuleId::R9, "Prop 2.8: iso-contact open book embeddings of the summands give one of the contact connected sum"),
    (RuleId::R10, "Prop 3.3: an iso-contact embedding of (M, xi) gives one of (M, xi^stot)"),
    (RuleId::F1, "Prop 3.2: (S^{2n-1}, xi_stot) embeds in the standard contact sphere"),
    (RuleId::F2, "Etnyre-Fukuwara: every closed orientable 3-manifold embeds in S5 with xi_std inducing a contact structure"),
    (RuleId::B1, "Barden: w2 = 0 exactly when the prime decomposition has no S2 x~ S3 summand"),
];

pub fn citation(id: RuleId) -> &'static str {
    RULE_TABLE.iter().find(|(r, _)| *r == id).map(|(_, c)| *c).expect("every rule is in the table")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Verdict {
    Embeds,
    Obstructed,
    Conditional,
    Unknown,
}

impl Verdict {
    pub fn token(self) -> &'static str {
        match self {
            Verdict::Embeds => "embeds",
            Verdict::Obstructed => "obstructed",
            Verdict::Conditional => "conditional",
            Verdict::Unknown => "unknown",
        }
    }

    /// CLI contract: 0 embeds, 1 obstructed, 2 conditional or unknown.
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Embeds => 0,
            Verdict::Obstructed => 1,
            Verdict::Conditional | Verdict::Unknown => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Target {
    S5,
    S7,
}

impl Target {
    pub fn for_dimension(dim: u8) -> Option<Target> {
        match dim {
            3 => Some(Target::S5),
            5 => Some(Target::S7),
            _ => None,
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for Target {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "s5" => Ok(Target::S5),
            "s7" => Ok(Target::S7),
            other => Err(format!("unknown target `{other}` (expected s5 or s7)")),
        }
    }
}

/// Propositions the engine reasons about.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Prop {
    C1Zero,
    C1Nonzero,
    NoTwoTorsion,
    TwoTorsion,
    Sphere5,
    SingleS2xS3,
    NoTwistedSummand,
    W2Zero,
    TargetS5,
    ContactEmbedding,
    AlmostContactHomotopic,
    OtEmbedsTrivialNormal,
    BaseEmbeds,
    SubjectIsStotOfBase,
    SubjectIsStotSphere,
    ClosedOrientable3,
    ConnectedSum(u32),
    SummandEmbeds(u32),
    Verdict(Verdict),
}

impl fmt::Display for Prop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Prop::C1Zero => "c1-zero".to_string(),
            Prop::C1Nonzero => "c1-nonzero".to_string(),
            Prop::NoTwoTorsion => "no-2-torsion".to_string(),
            Prop::TwoTorsion => "2-torsion".to_string(),
            Prop::Sphere5 => "sphere-s5".to_string(),
            Prop::SingleS2xS3 => "single-s2xs3".to_string(),
            Prop::NoTwistedSummand => "no-twisted-summand".to_string(),
            Prop::W2Zero => "w2-zero".to_string(),
            Prop::TargetS5 => "target-s5".to_string(),
            Prop::ContactEmbedding => "contact-embedding-exists".to_string(),
            Prop::AlmostContactHomotopic => "almost-contact-homotopic".to_string(),
            Prop::OtEmbedsTrivialNormal => "ot-embeds-trivial-normal".to_string(),
            Prop::BaseEmbeds => "base-embeds".to_string(),
            Prop::SubjectIsStotOfBase => "subject-is-stot-of-base".to_string(),
            Prop::SubjectIsStotSphere => "subject-is-stot-sphere".to_string(),
            Prop::ClosedOrientable3 => "closed-orientable-3-manifold".to_string(),
            Prop::ConnectedSum(k) => format!("connected-sum({k})"),
            Prop::SummandEmbeds(i) => format!("summand-embeds({i})"),
            Prop::Verdict(v) => v.token().to_string(),
        };
        f.write_str(&s)
    }
}

#[derive(Debug, Clone)]
struct Rule {
    id: RuleId,
    premises: Vec<Prop>,
    /// Stratified negation over input facts only.
    blocked_by: Vec<Prop>,
    conclusion: Prop,
}

impl Rule {
    fn new(id: RuleId, premises: Vec<Prop>, conclusion: Prop) -> Self {
        Rule { id, premises, blocked_by: vec![], conclusion }
    }

    fn embeds(id: RuleId, premises: Vec<Prop>) -> Self {
        Rule { id, premises, blocked_by: vec![Prop::C1Nonzero], conclusion: Prop::Verdict(Verdict::Embeds) }
    }

    fn is_terminal(&self) -> bool {
        matches!(self.conclusion, Prop::Verdict(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub rule: RuleId,
    pub citation: &'static str,
    /// Input facts (by name) or earlier steps (`step k`).
    pub premises: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub verdict: Verdict,
    pub target: Target,
    pub input: String,
    pub invariants: String,
    pub assumed: Vec<String>,
    pub derivation: Vec<Step>,
    pub notes: Vec<String>,
    /// Every verdict some terminal rule could have concluded.
    pub derivable: BTreeSet<Verdict>,
}

impl Certificate {
    /// Rule that produced the verdict, if any.
    pub fn terminal_rule(&self) -> Option<RuleId> {
        match self.verdict {
            Verdict::Unknown => None,
            _ => self.derivation.last().map(|s| s.rule),
        }
    }

    pub fn cites(&self, rule: RuleId) -> bool {
        self.derivation.iter().any(|s| s.rule == rule)
    }
}

struct Outcome {
    verdict: Verdict,
    derivation: Vec<Step>,
    derivable: BTreeSet<Verdict>,
    blocked: Vec<RuleId>,
}

/// Saturates non-terminal rules in table order, then fires the first applicable
/// terminal rule. The derivation keeps only the steps the verdict depends on.
fn run_engine(inputs: &BTreeSet<Prop>, rules: &[Rule]) -> Outcome {
    // proposition -> Some(step index) when derived, None when it was an input
    let mut known: BTreeMap<Prop, Option<usize>> = inputs.iter().map(|p| (p.clone(), None)).collect();
    let mut fired: Vec<(RuleId, Vec<Prop>)> = Vec::new();
    loop {
        let mut progress = false;
        for rule in rules.iter().filter(|r| !r.is_terminal()) {
            if known.contains_key(&rule.conclusion)
                || !rule.premises.iter().all(|p| known.contains_key(p))
                || rule.blocked_by.iter().any(|p| inputs.contains(p))
            {
                continue;
            }
            known.insert(rule.conclusion.clone(), Some(fired.len()));
            fired.push((rule.id, rule.premises.clone()));
            progress = true;
        }
        if !progress {
            break;
        }
    }

    let mut derivable = BTreeSet::new();
    let mut blocked = Vec::new();
    let mut chosen: Option<&Rule> = None;
    for rule in rules.iter().filter(|r| r.is_terminal()) {
        if !rule.premises.iter().all(|p| known.contains_key(p)) {
            continue;
        }
        if rule.blocked_by.iter().any(|p| inputs.contains(p)) {
            blocked.push(rule.id);
            continue;
        }
        if let Prop::Verdict(v) = rule.conclusion {
            derivable.insert(v);
        }
        chosen.get_or_insert(rule);
    }

    let Some(terminal) = chosen else {
        return Outcome { verdict: Verdict::Unknown, derivation: vec![], derivable, blocked };
    };

    // collect the supporting steps of the terminal rule
    let mut needed = BTreeSet::new();
    let mut stack: Vec<&Prop> = terminal.premises.iter().collect();
    while let Some(p) = stack.pop() {
        if let Some(Some(k)) = known.get(p) {
            if needed.insert(*k) {
                stack.extend(fired[*k].1.iter());
            }
        }
    }
    let mut renumber = BTreeMap::new();
    let mut derivation = Vec::new();
    let describe = |p: &Prop, renumber: &BTreeMap<usize, usize>| match known.get(p) {
        Some(Some(k)) => format!("step {}", renumber[k] + 1),
        _ => p.to_string(),
    };
    for k in needed {
        let (id, premises) = &fired[k];
        let refs = premises.iter().map(|p| describe(p, &renumber)).collect();
        renumber.insert(k, derivation.len());
        derivation.push(Step { rule: *id, citation: citation(*id), premises: refs });
    }
    let refs = terminal.premises.iter().map(|p| describe(p, &renumber)).collect();
    derivation.push(Step { rule: terminal.id, citation: citation(terminal.id), premises: refs });
    let Prop::Verdict(verdict) = terminal.conclusion else { unreachable!() };
    Outcome { verdict, derivation, derivable, blocked }
}

const NOTE_DISTINGUISHED: &str =
    "distinguished class not computed: a plane-field class [xi] exists but this tool does not compute it";

fn s5_rules() -> Vec<Rule> {
    vec![
        Rule::new(RuleId::R1, vec![Prop::C1Nonzero], Prop::Verdict(Verdict::Obstructed)),
        Rule::embeds(RuleId::R2, vec![Prop::C1Zero, Prop::NoTwoTorsion]),
        Rule {
            id: RuleId::R3,
            premises: vec![Prop::C1Zero, Prop::TwoTorsion],
            blocked_by: vec![Prop::C1Nonzero],
            conclusion: Prop::Verdict(Verdict::Conditional),
        },
    ]
}

/// Verdict for a 3-manifold from its homology and contact data alone.
pub fn certify_s5_invariants(
    label: &str,
    h1: &HomologySummary,
    desc: &ContactDescriptor,
) -> Result<Certificate, CertifyError> {
    if desc.dimension != 3 {
        return Err(CertifyError::DimensionMismatch { expected: 3, found: desc.dimension });
    }
    let mut inputs = BTreeSet::new();
    inputs.insert(if desc.c1.is_zero() { Prop::C1Zero } else { Prop::C1Nonzero });
    inputs.insert(if h1.two_torsion { Prop::TwoTorsion } else { Prop::NoTwoTorsion });
    let out = run_engine(&inputs, &s5_rules());
    let mut notes = desc.notes.clone();
    if out.verdict == Verdict::Conditional {
        notes.push(NOTE_DISTINGUISHED.to_string());
    }
    Ok(Certificate {
        verdict: out.verdict,
        target: Target::S5,
        input: label.to_string(),
        invariants: format!("{h1}, c1={}", desc.c1.token()),
        assumed: vec![],
        derivation: out.derivation,
        notes,
        derivable: out.derivable,
    })
}

pub fn certify_s5(ob: &OpenBook, desc: &ContactDescriptor) -> Result<Certificate, CertifyError> {
    certify_s5_invariants(ob.label(), &ob.first_homology(), desc)
}

/// A simply connected 5-manifold by its Barden prime decomposition.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FiveFoldDescription {
    pub s2xs3_count: u64,
    /// `(k, count)` pairs for `M_k` summands.
    pub mk: Vec<(u64, u64)>,
    pub twisted_count: u64,
    pub simply_connected: bool,
    pub almost_contact: bool,
}

impl FiveFoldDescription {
    pub fn sphere() -> Self {
        FiveFoldDescription { simply_connected: true, almost_contact: true, ..Default::default() }
    }

    pub fn mk_total(&self) -> u64 {
        self.mk.iter().map(|(_, c)| c).sum()
    }

    pub fn summand_count(&self) -> u64 {
        self.s2xs3_count + self.mk_total() + self.twisted_count
    }

    pub fn summary(&self) -> String {
        let mk = if self.mk.iter().all(|(_, c)| *c == 0) {
            "none".to_string()
        } else {
            self.mk
                .iter()
                .filter(|(_, c)| *c > 0)
                .map(|(k, c)| format!("M{k}x{c}"))
                .collect::<Vec<_>>()
                .join("+")
        };
        format!("s2xs3={}, mk={}, twisted={}", self.s2xs3_count, mk, self.twisted_count)
    }
}

fn s7_rules() -> Vec<Rule> {
    vec![
        Rule::new(RuleId::B1, vec![Prop::NoTwistedSummand], Prop::W2Zero),
        Rule::new(RuleId::R5, vec![Prop::Sphere5], Prop::Verdict(Verdict::Embeds)),
        Rule::new(RuleId::R1, vec![Prop::C1Nonzero], Prop::Verdict(Verdict::Obstructed)),
        Rule::embeds(RuleId::R6, vec![Prop::SingleS2xS3, Prop::C1Zero]),
        Rule::embeds(RuleId::R4, vec![Prop::W2Zero, Prop::C1Zero]),
    ]
}

pub fn certify_5fold_s7(
    m: &FiveFoldDescription,
    c1_zero: bool,
    label: &str,
) -> Result<Certificate, CertifyError> {
    if !m.simply_connected {
        return Err(CertifyError::NotSimplyConnected);
    }
    if !m.almost_contact {
        return Err(CertifyError::NotAlmostContact);
    }
    if let Some(&(k, _)) = m.mk.iter().find(|(k, _)| *k < 2) {
        return Err(CertifyError::BadMk(k));
    }
    let sphere = m.summand_count() == 0;
    if sphere && !c1_zero {
        return Err(CertifyError::SphereWithNonzeroC1);
    }
    let mut inputs = BTreeSet::new();
    inputs.insert(if c1_zero { Prop::C1Zero } else { Prop::C1Nonzero });
    if sphere {
        inputs.insert(Prop::Sphere5);
    }
    if m.s2xs3_count == 1 && m.summand_count() == 1 {
        inputs.insert(Prop::SingleS2xS3);
    }
    if m.twisted_count == 0 {
        inputs.insert(Prop::NoTwistedSummand);
    }
    let out = run_engine(&inputs, &s7_rules());
    let mut notes = vec![];
    if out.verdict == Verdict::Unknown {
        notes.push("outside Thm 1.5 hypotheses: a twisted S2 x~ S3 summand means w2 != 0".to_string());
    }
    let c1 = if c1_zero { "zero" } else { "nonzero" };
    Ok(Certificate {
        verdict: out.verdict,
        target: Target::S7,
        input: label.to_string(),
        invariants: format!("{}, c1={c1}", m.summary()),
        assumed: vec![],
        derivation: out.derivation,
        notes,
        derivable: out.derivable,
    })
}

/// Operator-supplied assertions for [`certify_general`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FactToken {
    ContactEmbeddingExists,
    AlmostContactHomotopic,
    OtEmbedsTrivialNormal,
    BaseEmbeds,
    SubjectIsStotOfBase,
    SubjectIsStotSphere,
    ClosedOrientable3Manifold,
    ConnectedSum(u32),
    SummandEmbeds(u32),
    C1Zero,
    C1Nonzero,
}

impl FactToken {
    pub const SIMPLE: &'static [(&'static str, FactToken)] = &[
        ("contact-embedding-exists", FactToken::ContactEmbeddingExists),
        ("almost-contact-homotopic", FactToken::AlmostContactHomotopic),
        ("ot-embeds-trivial-normal", FactToken::OtEmbedsTrivialNormal),
        ("base-embeds", FactToken::BaseEmbeds),
        ("subject-is-stot-of-base", FactToken::SubjectIsStotOfBase),
        ("subject-is-stot-sphere", FactToken::SubjectIsStotSphere),
        ("closed-orientable-3-manifold", FactToken::ClosedOrientable3Manifold),
        ("c1-zero", FactToken::C1Zero),
        ("c1-nonzero", FactToken::C1Nonzero),
    ];

    fn prop(&self) -> Prop {
        match self {
            FactToken::ContactEmbeddingExists => Prop::ContactEmbedding,
            FactToken::AlmostContactHomotopic => Prop::AlmostContactHomotopic,
            FactToken::OtEmbedsTrivialNormal => Prop::OtEmbedsTrivialNormal,
            FactToken::BaseEmbeds => Prop::BaseEmbeds,
            FactToken::SubjectIsStotOfBase => Prop::SubjectIsStotOfBase,
            FactToken::SubjectIsStotSphere => Prop::SubjectIsStotSphere,
            FactToken::ClosedOrientable3Manifold => Prop::ClosedOrientable3,
            FactToken::ConnectedSum(k) => Prop::ConnectedSum(*k),
            FactToken::SummandEmbeds(i) => Prop::SummandEmbeds(*i),
            FactToken::C1Zero => Prop::C1Zero,
            FactToken::C1Nonzero => Prop::C1Nonzero,
        }
    }
}

impl fmt::Display for FactToken {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.prop())
    }
}

impl FromStr for FactToken {
    type Err = CertifyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Some((_, t)) = Self::SIMPLE.iter().find(|(name, _)| *name == s) {
            return Ok(t.clone());
        }
        let indexed = |prefix: &str| {
            s.strip_prefix(prefix)
                .and_then(|r| r.strip_suffix(')'))
                .and_then(|r| r.parse::<u32>().ok())
                .filter(|&i| i >= 1)
        };
        if let Some(k) = indexed("connected-sum(") {
            return Ok(FactToken::ConnectedSum(k));
        }
        if let Some(i) = indexed("summand-embeds(") {
            return Ok(FactToken::SummandEmbeds(i));
        }
        Err(CertifyError::UnknownFact(s.to_string()))
    }
}

/// Forward-chains the general rules over assumed facts.
pub fn certify_general(
    facts: &BTreeSet<FactToken>,
    target: Target,
    label: &str,
) -> Result<Certificate, CertifyError> {
    if facts.contains(&FactToken::C1Zero) && facts.contains(&FactToken::C1Nonzero) {
        return Err(CertifyError::ConflictingFacts("c1-zero and c1-nonzero".into()));
    }
    let sums: Vec<u32> = facts
        .iter()
        .filter_map(|f| if let FactToken::ConnectedSum(k) = f { Some(*k) } else { None })
        .collect();
    if sums.len() > 1 {
        return Err(CertifyError::ConflictingFacts("more than one connected-sum(k)".into()));
    }
    if target != Target::S5 && facts.contains(&FactToken::ClosedOrientable3Manifold) {
        return Err(CertifyError::FactForWrongTarget("closed-orientable-3-manifold".into()));
    }
    let mut inputs: BTreeSet<Prop> = facts.iter().map(FactToken::prop).collect();
    if target == Target::S5 {
        inputs.insert(Prop::TargetS5);
    }

    let mut rules = vec![
        Rule::new(RuleId::F2, vec![Prop::ClosedOrientable3, Prop::TargetS5], Prop::ContactEmbedding),
        Rule::new(RuleId::R1, vec![Prop::C1Nonzero], Prop::Verdict(Verdict::Obstructed)),
        Rule::embeds(RuleId::R7, vec![Prop::ContactEmbedding, Prop::AlmostContactHomotopic]),
        Rule::embeds(RuleId::R8, vec![Prop::OtEmbedsTrivialNormal]),
    ];
    if let Some(&k) = sums.first() {
        let mut premises = vec![Prop::ConnectedSum(k)];
        premises.extend((1..=k).map(Prop::SummandEmbeds));
        rules.push(Rule::embeds(RuleId::R9, premises));
    }
    rules.push(Rule::embeds(RuleId::R10, vec![Prop::BaseEmbeds, Prop::SubjectIsStotOfBase]));
    rules.push(Rule::embeds(RuleId::F1, vec![Prop::SubjectIsStotSphere]));

    let out = run_engine(&inputs, &rules);
    let mut notes = vec![];
    if !out.blocked.is_empty() {
        let ids: Vec<String> = out.blocked.iter().map(ToString::to_string).collect();
        notes.push(format!(
            "assumed embedding premises for {} contradict c1 != 0; those rules were not fired",
            ids.join(", ")
        ));
    }
    if out.verdict == Verdict::Unknown {
        notes.push("no rule applies to the assumed facts".to_string());
    }
    Ok(Certificate {
        verdict: out.verdict,
        target,
        input: label.to_string(),
        invariants: format!("facts={}", facts.len()),
        assumed: facts.iter().map(ToString::to_string).collect(),
        derivation: out.derivation,
        notes,
        derivable: out.derivable,
    })
}

/// Fixed field order; byte-identical for identical certificates.
pub fn render_certificate(c: &Certificate) -> String {
    let mut out = String::new();
    out.push_str(&format!("verdict: {}\n", c.verdict.token()));
    out.push_str(&format!("target: {}\n", c.target));
    out.push_str(&format!("input: {}\n", c.input));
    out.push_str(&format!("invariants: {}\n", c.invariants));
    for a in &c.assumed {
        out.push_str(&format!("assumed: {a}\n"));
    }
    for (k, s) in c.derivation.iter().enumerate() {
        out.push_str(&format!("step {}: {} — {} [{}]\n", k + 1, s.rule, s.citation, s.premises.join(", ")));
    }
    for n in &c.notes {
        out.push_str(&format!("note: {n}\n"));
    }
    out
}
