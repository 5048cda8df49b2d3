//! Discrete-event simulation of acquaintance-network growth.
//!
//! A five-clique seeds the graph. A priority queue orders nodes by wake-up
//! time; each main-cycle iteration pops the earliest waker, lets it close a
//! random two-hop edge if it is still alive, reschedules it, and then inserts
//! the nodes that arrived during the elapsed interval, each attached to the
//! existing graph by preferential attachment.
//!
//! Lifetimes are exponential with rate `lambda` (per day). Sleep times follow
//! the kernel x^(-alpha) * exp(-beta * d * x) for a node of degree d, which
//! is exactly a gamma distribution with shape `1 - alpha` and rate
//! `beta * d`; the normalizing constant never needs to be materialized.

use crate::graph::{Graph, GraphError, VertexId};
use ordered_float::OrderedFloat;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp, Gamma, Poisson};
use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// Average Gregorian month length; arrival functions are monthly while the
/// simulation clock runs in days.
pub const DAYS_PER_MONTH: f64 = 30.44;

/// Default stability throttle for simulation arrivals (see
/// [`GrowthParams::arrival_throttle`]).
pub const DEFAULT_ARRIVAL_THROTTLE: f64 = 1900.0;

#[derive(Debug, Error, PartialEq)]
pub enum GrowthError {
    #[error("alpha must lie in (0, 1), got {0}")]
    AlphaOutOfRange(f64),
    #[error("{name} must be positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("termination spec must set at least one bound")]
    UnboundedTermination,
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("event log line {line}: {message}")]
    BadEventLog { line: usize, message: String },
}

/// Expected node arrivals per month as a function of time in months.
#[derive(Debug, Clone, PartialEq)]
pub enum ArrivalFunction {
    /// Coefficients in ascending degree: c0 + c1*t + c2*t^2 + ...
    Polynomial(Vec<f64>),
    /// scale * exp(rate * t)
    Exponential { scale: f64, rate: f64 },
}

impl ArrivalFunction {
    /// Evaluate at `t_months`, clamping negative values to zero.
    pub fn monthly_rate(&self, t_months: f64) -> f64 {
        let raw = match self {
            ArrivalFunction::Polynomial(coeffs) => coeffs
                .iter()
                .rev()
                .fold(0.0, |acc, &c| acc * t_months + c),
            ArrivalFunction::Exponential { scale, rate } => scale * (rate * t_months).exp(),
        };
        raw.max(0.0)
    }
}

/// Parameters of the growth model: arrival function plus the sleep exponent
/// `alpha`, sleep rate coefficient `beta` (per day), and lifetime rate
/// `lambda` (per day).
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthParams {
    pub arrival: ArrivalFunction,
    pub alpha: f64,
    pub beta: f64,
    pub lambda: f64,
    /// Stability throttle for [`generate_base`]: the expected arrivals
    /// inserted in one event interval are capped at
    /// `arrival_throttle / current node count`. The published arrival
    /// functions describe networks of millions, so an unthrottled desk-scale
    /// run degenerates into a handful of enormous arrival bursts; the
    /// size-coupled cap keeps batches small while total growth follows the
    /// same square-root-of-iterations trajectory the model is known for.
    /// Has no effect on [`arrivals_between`].
    pub arrival_throttle: f64,
}

impl GrowthParams {
    pub fn new(arrival: ArrivalFunction, alpha: f64, beta: f64, lambda: f64) -> Self {
        GrowthParams {
            arrival,
            alpha,
            beta,
            lambda,
            arrival_throttle: DEFAULT_ARRIVAL_THROTTLE,
        }
    }

    pub fn validate(&self) -> Result<(), GrowthError> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(GrowthError::AlphaOutOfRange(self.alpha));
        }
        if !(self.beta > 0.0) {
            return Err(GrowthError::NonPositive {
                name: "beta",
                value: self.beta,
            });
        }
        if !(self.lambda > 0.0) {
            return Err(GrowthError::NonPositive {
                name: "lambda",
                value: self.lambda,
            });
        }
        if !(self.arrival_throttle > 0.0) {
            return Err(GrowthError::NonPositive {
                name: "arrival_throttle",
                value: self.arrival_throttle,
            });
        }
        Ok(())
    }
}

/// Named parameter rows for the networks the growth model was fitted to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    Flickr,
    Delicious,
    Answers,
    LinkedIn,
}

impl Preset {
    pub const ALL: [Preset; 4] = [
        Preset::Flickr,
        Preset::Delicious,
        Preset::Answers,
        Preset::LinkedIn,
    ];

    pub fn params(self) -> GrowthParams {
        match self {
            Preset::Flickr => GrowthParams::new(
                ArrivalFunction::Exponential {
                    scale: 1.0,
                    rate: 0.25,
                },
                0.84,
                0.002,
                0.0092,
            ),
            Preset::Delicious => GrowthParams::new(
                ArrivalFunction::Polynomial(vec![40000.0, 3000.0, 16.0]),
                0.92,
                0.00032,
                0.0052,
            ),
            Preset::Answers => GrowthParams::new(
                ArrivalFunction::Polynomial(vec![-2500.0, 160000.0, -4544.0]),
                0.85,
                0.0038,
                0.0019,
            ),
            Preset::LinkedIn => GrowthParams::new(
                ArrivalFunction::Polynomial(vec![-130000.0, 76000.0, 3900.0]),
                0.78,
                0.00036,
                0.0018,
            ),
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Preset::Flickr => "flickr",
            Preset::Delicious => "delicious",
            Preset::Answers => "answers",
            Preset::LinkedIn => "linkedin",
        };
        f.write_str(name)
    }
}

impl FromStr for Preset {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "flickr" => Ok(Preset::Flickr),
            "delicious" => Ok(Preset::Delicious),
            "answers" => Ok(Preset::Answers),
            "linkedin" => Ok(Preset::LinkedIn),
            other => Err(format!(
                "unknown preset `{other}` (expected flickr|delicious|answers|linkedin)"
            )),
        }
    }
}

/// Bounds for the main simulation cycle; at least one must be set.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TerminationSpec {
    /// Stop once the clock reaches this many days.
    pub max_clock: Option<f64>,
    /// Stop after this many main-cycle iterations.
    pub max_iterations: Option<u64>,
    /// Stop once the graph holds this many nodes.
    pub max_nodes: Option<usize>,
}

impl TerminationSpec {
    pub fn iterations(n: u64) -> Self {
        TerminationSpec {
            max_iterations: Some(n),
            ..Default::default()
        }
    }

    pub fn nodes(n: usize) -> Self {
        TerminationSpec {
            max_nodes: Some(n),
            ..Default::default()
        }
    }

    pub fn clock(days: f64) -> Self {
        TerminationSpec {
            max_clock: Some(days),
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<(), GrowthError> {
        if self.max_clock.is_none() && self.max_iterations.is_none() && self.max_nodes.is_none() {
            Err(GrowthError::UnboundedTermination)
        } else {
            Ok(())
        }
    }

    fn tripped(&self, clock: f64, iterations: u64, nodes: usize) -> bool {
        self.max_clock.is_some_and(|t| clock >= t)
            || self.max_iterations.is_some_and(|n| iterations >= n)
            || self.max_nodes.is_some_and(|n| nodes >= n)
    }
}

/// Draw a node lifetime in days from Exp(lambda).
pub fn sample_lifetime<R: Rng + ?Sized>(
    params: &GrowthParams,
    rng: &mut R,
) -> Result<f64, GrowthError> {
    if !(params.lambda > 0.0) {
        return Err(GrowthError::NonPositive {
            name: "lambda",
            value: params.lambda,
        });
    }
    let exp = Exp::new(params.lambda).expect("validated rate");
    Ok(exp.sample(rng))
}

/// Draw a sleep time in days for a node of degree `degree`.
///
/// The kernel x^(-alpha) * exp(-beta*d*x) is the gamma density with shape
/// `1 - alpha` and rate `beta * d`. Degree is clamped to at least 1 so that
/// a (normally impossible) isolated node still gets a finite sleep.
pub fn sample_sleep<R: Rng + ?Sized>(
    degree: usize,
    params: &GrowthParams,
    rng: &mut R,
) -> Result<f64, GrowthError> {
    if !(params.alpha > 0.0 && params.alpha < 1.0) {
        return Err(GrowthError::AlphaOutOfRange(params.alpha));
    }
    if !(params.beta > 0.0) {
        return Err(GrowthError::NonPositive {
            name: "beta",
            value: params.beta,
        });
    }
    let d = degree.max(1) as f64;
    let gamma = Gamma::new(1.0 - params.alpha, 1.0 / (params.beta * d)).expect("validated shape");
    Ok(gamma.sample(rng))
}

/// Number of nodes arriving in the interval `[t0, t1]` (days).
///
/// Poisson with mean `A(t0 months) / DAYS_PER_MONTH * (t1 - t0)`, the
/// left-endpoint approximation of the integrated monthly arrival curve.
pub fn arrivals_between<R: Rng + ?Sized>(
    t0: f64,
    t1: f64,
    params: &GrowthParams,
    rng: &mut R,
) -> u64 {
    let span = (t1 - t0).max(0.0);
    let mean = params.arrival.monthly_rate(t0 / DAYS_PER_MONTH) / DAYS_PER_MONTH * span;
    sample_poisson(mean, rng)
}

fn sample_poisson<R: Rng + ?Sized>(mean: f64, rng: &mut R) -> u64 {
    if mean <= 0.0 {
        return 0;
    }
    let poisson = Poisson::new(mean).expect("positive finite mean");
    poisson.sample(rng) as u64
}

/// Try to close a random two-hop path starting at `u`.
///
/// Draws a uniform neighbor v of u, then a uniform neighbor w of v; the edge
/// (u, w) is created when w is at distance exactly two from u. Up to ten
/// (v, w) draws are attempted before giving up, which is a normal outcome.
pub fn close_two_hop<R: Rng + ?Sized>(
    g: &mut Graph,
    u: VertexId,
    rng: &mut R,
) -> Result<Option<VertexId>, GraphError> {
    const ATTEMPTS: usize = 10;
    let du = g.degree(u)?;
    if du == 0 {
        return Ok(None);
    }
    for _ in 0..ATTEMPTS {
        let nu = g.neighbors(u)?;
        let v = nu[rng.random_range(0..nu.len())];
        let nv = g.neighbors(v)?;
        let w = nv[rng.random_range(0..nv.len())];
        if w != u && !g.has_edge(u, w) {
            g.add_edge(u, w)?;
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// Pick an attachment target with probability proportional to degree,
/// excluding `exclude` (typically the newcomer itself).
pub fn preferential_target<R: Rng + ?Sized>(
    g: &Graph,
    exclude: VertexId,
    rng: &mut R,
) -> Result<VertexId, GraphError> {
    let exclude_degree = if g.contains_vertex(exclude) {
        g.degree(exclude)?
    } else {
        0
    };
    let total = 2 * g.edge_count() - exclude_degree;
    if total == 0 {
        return Err(GraphError::NoEligibleTarget);
    }
    let r = rng.random_range(0..total);
    let mut cum = 0;
    for w in g.vertices() {
        if w == exclude {
            continue;
        }
        cum += g.degree(w)?;
        if r < cum {
            return Ok(w);
        }
    }
    unreachable!("cumulative degree walk covers the drawn index")
}

/// What happened at one point of the simulation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EventKind {
    /// Seed-clique node created at t = 0.
    Init,
    /// Seed-clique edge (node, peer) at t = 0.
    Edge,
    /// Node popped from the queue.
    Wake,
    /// Two-hop closure edge (node, peer).
    TwoHop,
    /// Node arrived and attached to peer.
    Arrive,
    /// Node popped after its death time; removed from circulation.
    Retire,
}

impl EventKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EventKind::Init => "init",
            EventKind::Edge => "edge",
            EventKind::Wake => "wake",
            EventKind::TwoHop => "twohop",
            EventKind::Arrive => "arrive",
            EventKind::Retire => "retire",
        }
    }
}

impl FromStr for EventKind {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "init" => Ok(EventKind::Init),
            "edge" => Ok(EventKind::Edge),
            "wake" => Ok(EventKind::Wake),
            "twohop" => Ok(EventKind::TwoHop),
            "arrive" => Ok(EventKind::Arrive),
            "retire" => Ok(EventKind::Retire),
            _ => Err(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Event {
    /// Clock value in days.
    pub t: f64,
    pub kind: EventKind,
    pub node: VertexId,
    pub peer: Option<VertexId>,
}

/// Render events as CSV (`t,event,node,peer`), peer blank when absent.
pub fn events_to_csv(events: &[Event]) -> String {
    let mut out = String::from("t,event,node,peer\n");
    for e in events {
        let peer = e.peer.map(|p| p.to_string()).unwrap_or_default();
        out.push_str(&format!("{},{},{},{}\n", e.t, e.kind.as_str(), e.node, peer));
    }
    out
}

/// Parse an event-log CSV produced by [`events_to_csv`].
pub fn events_from_csv(text: &str) -> Result<Vec<Event>, GrowthError> {
    let mut events = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        if idx == 0 {
            if line.trim() != "t,event,node,peer" {
                return Err(GrowthError::BadEventLog {
                    line: line_no,
                    message: format!("expected header `t,event,node,peer`, found `{line}`"),
                });
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 4 {
            return Err(GrowthError::BadEventLog {
                line: line_no,
                message: format!("expected 4 fields, found {}", fields.len()),
            });
        }
        let bad = |message: String| GrowthError::BadEventLog {
            line: line_no,
            message,
        };
        let t: f64 = fields[0]
            .parse()
            .map_err(|_| bad(format!("bad time `{}`", fields[0])))?;
        let kind: EventKind = fields[1]
            .parse()
            .map_err(|()| bad(format!("bad event kind `{}`", fields[1])))?;
        let node: VertexId = fields[2]
            .parse()
            .map_err(|_| bad(format!("bad node id `{}`", fields[2])))?;
        let peer = if fields[3].is_empty() {
            None
        } else {
            Some(
                fields[3]
                    .parse()
                    .map_err(|_| bad(format!("bad peer id `{}`", fields[3])))?,
            )
        };
        events.push(Event { t, kind, node, peer });
    }
    Ok(events)
}

/// Result of one growth run.
#[derive(Debug, Clone)]
pub struct GrowthRun {
    pub graph: Graph,
    pub events: Vec<Event>,
    /// Clock value at which each node stops acting, indexed by vertex id.
    pub death_times: Vec<f64>,
    /// Main-cycle iterations actually executed.
    pub iterations: u64,
    pub final_clock: f64,
}

const SEED_CLIQUE: usize = 5;

/// Run the growth simulation until a termination bound trips.
///
/// Fully deterministic given `seed`. The output graph is connected: growth
/// only ever attaches to the existing component.
pub fn generate_base(
    params: &GrowthParams,
    term: &TerminationSpec,
    seed: u64,
) -> Result<GrowthRun, GrowthError> {
    params.validate()?;
    term.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut graph = Graph::complete(SEED_CLIQUE);
    let mut events = Vec::new();
    let mut death_times = Vec::with_capacity(SEED_CLIQUE);
    // Min-heap on (wake time, vertex id); ties broken by the smaller id.
    let mut queue: BinaryHeap<Reverse<(OrderedFloat<f64>, VertexId)>> = BinaryHeap::new();

    for v in 0..SEED_CLIQUE {
        events.push(Event {
            t: 0.0,
            kind: EventKind::Init,
            node: v,
            peer: None,
        });
    }
    for (u, v) in Graph::complete(SEED_CLIQUE).edges() {
        events.push(Event {
            t: 0.0,
            kind: EventKind::Edge,
            node: u,
            peer: Some(v),
        });
    }
    for v in 0..SEED_CLIQUE {
        death_times.push(sample_lifetime(params, &mut rng)?);
        let sleep = sample_sleep(SEED_CLIQUE - 1, params, &mut rng)?;
        queue.push(Reverse((OrderedFloat(sleep), v)));
    }

    let mut clock = 0.0f64;
    let mut iterations = 0u64;

    while !term.tripped(clock, iterations, graph.vertex_count()) {
        let Some(Reverse((wake, u))) = queue.pop() else {
            break; // every node retired; nothing left to advance the clock
        };
        let t0 = clock;
        clock = wake.into_inner();
        events.push(Event {
            t: clock,
            kind: EventKind::Wake,
            node: u,
            peer: None,
        });

        if clock <= death_times[u] {
            if let Some(w) = close_two_hop(&mut graph, u, &mut rng)? {
                events.push(Event {
                    t: clock,
                    kind: EventKind::TwoHop,
                    node: u,
                    peer: Some(w),
                });
            }
            let sleep = sample_sleep(graph.degree(u)?, params, &mut rng)?;
            queue.push(Reverse((OrderedFloat(clock + sleep), u)));
        } else {
            events.push(Event {
                t: clock,
                kind: EventKind::Retire,
                node: u,
                peer: None,
            });
        }

        // Arrivals over (t0, clock], throttled so one interval cannot dump
        // an arbitrarily large burst into a desk-scale run.
        let raw_mean = params.arrival.monthly_rate(t0 / DAYS_PER_MONTH) / DAYS_PER_MONTH
            * (clock - t0).max(0.0);
        let mean = raw_mean.min(params.arrival_throttle / graph.vertex_count() as f64);
        let count = sample_poisson(mean, &mut rng);
        for _ in 0..count {
            let v = graph.add_vertex();
            let w = preferential_target(&graph, v, &mut rng)?;
            graph.add_edge(v, w)?;
            events.push(Event {
                t: clock,
                kind: EventKind::Arrive,
                node: v,
                peer: Some(w),
            });
            death_times.push(clock + sample_lifetime(params, &mut rng)?);
            let sleep = sample_sleep(graph.degree(v)?, params, &mut rng)?;
            queue.push(Reverse((OrderedFloat(clock + sleep), v)));
        }

        iterations += 1;
    }

    Ok(GrowthRun {
        graph,
        events,
        death_times,
        iterations,
        final_clock: clock,
    })
}
