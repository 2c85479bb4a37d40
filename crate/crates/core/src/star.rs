//! Exact algorithms for stars and trees of diameter three, any palette.
//!
//! Every connected partition of these trees has one or two "pods" (a block
//! holding a center) while every other district is a single leaf. A pod is
//! described by a center weight vector and its leaves grouped by color.
//! For each pod we guess the color `q*` it is colored as and how many
//! target and `q*` leaves it gives up. That fixes the pod's threshold `T`,
//! and for every other color the fewest heaviest leaves that must leave the
//! pod to stay under `T`. Colors then decouple: each has an interval of
//! feasible removal totals under its district cap, and the guess works iff
//! `k - #pods` falls inside the summed interval.
//!
//! Zero-weight leaves never help when detached, so they stay in pods unless
//! there are not enough positive leaves to reach `k` districts. In that case
//! the only configuration worth checking detaches every positive leaf.

use std::cmp::Reverse;
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::eval::{evaluate_partition, Partition};
use crate::instance::{ColorId, Instance, Mode, VertexId};
use crate::oracle::OracleResult;

/// Fewest leaves to remove from the heavy end of `sorted_desc` so that the
/// rest sums to at most `budget` (below it when `strict`). Returns the list
/// length when no count works.
pub fn beta_count(sorted_desc: &[u64], budget: i64, strict: bool) -> Result<usize> {
    if sorted_desc.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::invalid("leaf weights must be sorted in descending order"));
    }
    let prefix = prefix_sums(sorted_desc.iter().copied());
    Ok(beta_from_prefix(&prefix, budget as i128, strict).unwrap_or(sorted_desc.len()))
}

fn prefix_sums(weights: impl Iterator<Item = u64>) -> Vec<u64> {
    let mut out = vec![0];
    let mut acc = 0;
    for w in weights {
        acc += w;
        out.push(acc);
    }
    out
}

fn beta_from_prefix(prefix: &[u64], budget: i128, strict: bool) -> Option<usize> {
    let total = *prefix.last().expect("prefix sums start at 0") as i128;
    let fits = |b: usize| {
        let rest = total - prefix[b] as i128;
        if strict {
            rest < budget
        } else {
            rest <= budget
        }
    };
    // `fits` is monotone in b.
    let (mut lo, mut hi) = (0usize, prefix.len() - 1);
    if !fits(hi) {
        return None;
    }
    while lo < hi {
        let mid = (lo + hi) / 2;
        if fits(mid) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Some(lo)
}

/// Whether the two centers of a diameter-3 tree share a district.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GuessCase {
    Merged,
    Split,
}

/// Guess for one center block: the color it is colored as (uniquely, when
/// it is the target), and how many target and `q_star` leaves it detaches.
/// `alpha_qstar` is zero when `q_star` is the target.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PodGuess {
    pub q_star: ColorId,
    pub alpha_p: usize,
    pub alpha_qstar: usize,
}

/// One pod guess for [`GuessCase::Merged`] (and for stars), two for
/// [`GuessCase::Split`] in center-id order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseGuess {
    pub case: GuessCase,
    pub pods: Vec<PodGuess>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeasibilityOutcome {
    pub feasible: bool,
    /// Uniquely target-colored districts the guess commits to.
    pub x: usize,
    /// Summed `β(q)` over the pods not guessed as `q`.
    pub beta: BTreeMap<ColorId, usize>,
    pub partition: Option<Partition>,
}

#[derive(Clone, Debug)]
struct Pod {
    centers: Vec<VertexId>,
    center: Vec<u64>,
    /// Positive leaves by color, heaviest first (ties by id).
    leaves: Vec<Vec<(u64, VertexId)>>,
    prefix: Vec<Vec<u64>>,
    zeros: Vec<VertexId>,
}

impl Pod {
    fn new(inst: &Instance, centers: Vec<VertexId>, leaf_ids: impl IntoIterator<Item = VertexId>) -> Self {
        let c = inst.color_count();
        let mut center = vec![0; c];
        for &v in &centers {
            center[inst.color_of[v].index()] += inst.weights[v];
        }
        let mut leaves = vec![Vec::new(); c];
        let mut zeros = Vec::new();
        for v in leaf_ids {
            if inst.weights[v] == 0 {
                zeros.push(v);
            } else {
                leaves[inst.color_of[v].index()].push((inst.weights[v], v));
            }
        }
        for list in &mut leaves {
            list.sort_by_key(|&(w, v)| (Reverse(w), v));
        }
        let prefix = leaves.iter().map(|l| prefix_sums(l.iter().map(|&(w, _)| w))).collect();
        zeros.sort_unstable();
        Pod {
            centers,
            center,
            leaves,
            prefix,
            zeros,
        }
    }

    fn positive_leaves(&self) -> usize {
        self.leaves.iter().map(Vec::len).sum()
    }

    fn count(&self, q: usize) -> usize {
        self.leaves[q].len()
    }

    /// Weight of color `q` kept after dropping the heaviest `b` leaves.
    fn kept_after_heavy(&self, q: usize, b: usize) -> u64 {
        self.prefix[q][self.count(q)] - self.prefix[q][b]
    }

    /// Weight of color `q` kept after dropping the lightest `a` leaves.
    fn kept_after_light(&self, q: usize, a: usize) -> u64 {
        self.prefix[q][self.count(q) - a]
    }
}

#[derive(Clone, Copy, Debug, Default)]
struct Slack {
    beta: usize,
    max: usize,
    tie: bool,
}

/// A pod guess with everything the combination step needs.
#[derive(Clone, Debug)]
struct Scored {
    guess: PodGuess,
    /// False when the pod cannot be colored as guessed.
    attainable: bool,
    /// Uniquely-target districts this pod produces.
    x: usize,
    /// Leaves removed by the guess itself.
    fixed: usize,
    /// Per color; unused for the target and the winner.
    slack: Vec<Slack>,
}

impl Scored {
    fn winner(&self) -> usize {
        self.guess.q_star.index()
    }
}

fn score(pod: &Pod, target: usize, guess: PodGuess) -> Scored {
    let winner = guess.q_star.index();
    let uniquely = winner == target;
    let (t, x, fixed, mut attainable) = if uniquely {
        let t = pod.center[target] + pod.kept_after_light(target, guess.alpha_p);
        (t, guess.alpha_p + 1, guess.alpha_p, true)
    } else {
        let t = pod.center[winner] + pod.kept_after_light(winner, guess.alpha_qstar);
        let p_left = pod.center[target] + pod.kept_after_heavy(target, guess.alpha_p);
        (t, guess.alpha_p, guess.alpha_p + guess.alpha_qstar, p_left <= t)
    };
    let mut slack = vec![Slack::default(); pod.center.len()];
    for (q, s) in slack.iter_mut().enumerate() {
        if q == target || q == winner {
            continue;
        }
        let budget = t as i128 - pod.center[q] as i128;
        let max = pod.count(q);
        let beta = match beta_from_prefix(&pod.prefix[q], budget, uniquely) {
            Some(b) => b,
            None => {
                attainable = false;
                max
            }
        };
        let tie = !uniquely && pod.center[q] + pod.kept_after_heavy(q, beta) == t;
        *s = Slack { beta, max, tie };
    }
    Scored {
        guess,
        attainable,
        x,
        fixed,
        slack,
    }
}

/// All attainable guesses for one pod in lexicographic order.
fn score_guesses(pod: &Pod, target: usize, colors: usize) -> Vec<Scored> {
    let np = pod.count(target);
    let mut out = Vec::new();
    for winner in 0..colors {
        let top = if winner == target { 0 } else { pod.count(winner) };
        for alpha_p in 0..=np {
            for alpha_qstar in 0..=top {
                let guess = PodGuess {
                    q_star: ColorId(winner),
                    alpha_p,
                    alpha_qstar,
                };
                let s = score(pod, target, guess);
                if s.attainable {
                    out.push(s);
                }
            }
        }
    }
    out
}

/// Per-color range of detached-leaf totals that respects the color's cap.
#[derive(Clone, Copy, Debug)]
struct ColorRange {
    min: usize,
    max: usize,
}

/// A color's district count is its detached leaves plus the pods colored
/// by it. Pods guessed as `q` contribute a fixed amount; elsewhere `q`
/// detaches at least `β` leaves and ties the pod only at exactly `β`. A
/// soft tie (`β` below the leaf count) is broken by one more removal.
fn combine(choice: &[&Scored], target: usize, colors: usize, free: usize) -> Option<Vec<Option<ColorRange>>> {
    if choice.iter().any(|s| !s.attainable) {
        return None;
    }
    let x: usize = choice.iter().map(|s| s.x).sum();
    let fixed: usize = choice.iter().map(|s| s.fixed).sum();
    let (mut lo, mut hi) = (fixed, fixed);
    let mut ranges = vec![None; colors];
    for (q, range) in ranges.iter_mut().enumerate() {
        if q == target {
            continue;
        }
        let mut cap = x as i64 - 1;
        let (mut sum_beta, mut sum_max, mut forced, mut soft) = (0, 0, 0, 0);
        for s in choice {
            if s.winner() == q {
                cap -= s.guess.alpha_qstar as i64 + 1;
                continue;
            }
            let sl = s.slack[q];
            sum_beta += sl.beta;
            sum_max += sl.max;
            if sl.tie && sl.beta == sl.max {
                forced += 1;
            } else if sl.tie {
                soft += 1;
            }
        }
        if ((sum_beta + forced + soft) as i64) > cap {
            return None;
        }
        let max = sum_max.min((cap - forced as i64) as usize);
        lo += sum_beta;
        hi += max;
        *range = Some(ColorRange { min: sum_beta, max });
    }
    (lo <= free && free <= hi).then_some(ranges)
}

/// Turns a feasible combination into per-pod, per-color removal counts.
/// Extra removals go to the colors with the most slack first.
fn allocate(choice: &[&Scored], ranges: &[Option<ColorRange>], target: usize, free: usize) -> Vec<Vec<usize>> {
    let colors = ranges.len();
    let mut removed: Vec<Vec<usize>> = choice
        .iter()
        .map(|s| {
            let mut row: Vec<usize> = s.slack.iter().map(|sl| sl.beta).collect();
            row[target] = s.guess.alpha_p;
            if s.winner() != target {
                row[s.winner()] = s.guess.alpha_qstar;
            }
            row
        })
        .collect();
    let mut extra = free - choice.iter().map(|s| s.fixed).sum::<usize>();
    extra -= ranges.iter().flatten().map(|r| r.min).sum::<usize>();

    let mut by_slack: Vec<(usize, ColorRange)> = (0..colors).filter_map(|q| Some((q, ranges[q]?))).collect();
    by_slack.sort_by_key(|&(q, r)| (Reverse(r.max - r.min), q));
    for (q, r) in by_slack {
        let mut give = extra.min(r.max - r.min);
        extra -= give;
        let open: Vec<usize> = (0..choice.len()).filter(|&i| choice[i].winner() != q).collect();
        // Break soft ties first, then fill anywhere.
        for &i in &open {
            let sl = choice[i].slack[q];
            if give > 0 && sl.tie && sl.beta < sl.max {
                removed[i][q] += 1;
                give -= 1;
            }
        }
        for &i in &open {
            let room = choice[i].slack[q].max - removed[i][q];
            let step = give.min(room);
            removed[i][q] += step;
            give -= step;
        }
        debug_assert_eq!(give, 0);
    }
    debug_assert_eq!(extra, 0);
    removed
}

fn build_partition(pods: &[Pod], choice: &[&Scored], removed: &[Vec<usize>], target: usize) -> Partition {
    let mut blocks = Vec::new();
    for ((pod, s), row) in pods.iter().zip(choice).zip(removed) {
        let mut block = pod.centers.clone();
        block.extend(&pod.zeros);
        for (q, &r) in row.iter().enumerate() {
            let list = &pod.leaves[q];
            // Leaves of the guessed color leave from the light end, target
            // leaves of a rival pod from the heavy end. Other colors give up
            // their `β` heaviest and then the lightest of the rest.
            let heavy = if q == s.winner() {
                0
            } else if q == target {
                r
            } else {
                s.slack[q].beta
            };
            let light = r - heavy;
            let (head, rest) = list.split_at(heavy);
            let (kept, tail) = rest.split_at(rest.len() - light);
            block.extend(kept.iter().map(|&(_, v)| v));
            blocks.extend(head.iter().chain(tail).map(|&(_, v)| vec![v]));
        }
        block.sort_unstable();
        blocks.push(block);
    }
    Partition::new(blocks)
}

/// Detach every positive leaf and then zero-weight leaves until `k`
/// districts exist.
fn detach_everything(inst: &Instance, pods: &[Pod]) -> Option<Partition> {
    let positive: usize = pods.iter().map(Pod::positive_leaves).sum();
    let mut need = inst.k.checked_sub(pods.len() + positive)?;
    let mut blocks = Vec::new();
    for pod in pods {
        let take = need.min(pod.zeros.len());
        need -= take;
        let mut block = pod.centers.clone();
        block.extend(&pod.zeros[take..]);
        blocks.push(block);
        blocks.extend(pod.zeros[..take].iter().map(|&v| vec![v]));
        for list in &pod.leaves {
            blocks.extend(list.iter().map(|&(_, v)| vec![v]));
        }
    }
    (need == 0).then(|| Partition::new(blocks))
}

fn verified(inst: &Instance, part: Partition) -> Result<Partition> {
    let report = evaluate_partition(inst, &part);
    if !report.is_solution {
        return Err(Error::Internal(format!(
            "assembled partition is not a solution: {:?}",
            report.violation
        )));
    }
    Ok(part)
}

/// Decides whether some partition with exactly these pods is a solution.
fn solve_pods(inst: &Instance, pods: &[Pod]) -> Result<(Option<Partition>, u64)> {
    let target = inst.target.index();
    let colors = inst.color_count();
    let Some(free) = inst.k.checked_sub(pods.len()) else {
        return Ok((None, 0));
    };
    let positive: usize = pods.iter().map(Pod::positive_leaves).sum();
    if free > positive {
        let Some(part) = detach_everything(inst, pods) else {
            return Ok((None, 0));
        };
        let ok = evaluate_partition(inst, &part).is_solution;
        return Ok((ok.then_some(part), 1));
    }

    let scored: Vec<Vec<Scored>> = pods.iter().map(|p| score_guesses(p, target, colors)).collect();
    let mut examined = 0u64;
    let mut attempt = |choice: &[&Scored]| -> Option<Vec<Vec<usize>>> {
        examined += 1;
        let ranges = combine(choice, target, colors, free)?;
        Some(allocate(choice, &ranges, target, free))
    };
    let hit = match scored.as_slice() {
        [one] => one.iter().find_map(|a| attempt(&[a]).map(|r| (vec![a], r))),
        [first, second] => first
            .iter()
            .find_map(|a| second.iter().find_map(|b| attempt(&[a, b]).map(|r| (vec![a, b], r)))),
        _ => return Err(Error::Internal(format!("{} pods", pods.len()))),
    };
    let Some((choice, removed)) = hit else {
        return Ok((None, examined));
    };
    let part = verified(inst, build_partition(pods, &choice, &removed, target))?;
    Ok((Some(part), examined))
}

fn check_common(inst: &Instance) -> Result<usize> {
    if inst.mode == Mode::Disconnected {
        return Err(Error::DisconnectedInstance);
    }
    if !inst.is_tree() {
        return Err(Error::NotATree);
    }
    if inst.k == 0 || inst.k > inst.vertex_count() {
        return Err(Error::invalid(format!("k = {} out of range", inst.k)));
    }
    Ok(inst.classify_shape().diameter.unwrap_or(0))
}

fn star_pod(inst: &Instance) -> Pod {
    let adj = inst.adjacency();
    let center = (0..inst.vertex_count())
        .max_by_key(|&v| (adj[v].len(), Reverse(v)))
        .unwrap_or(0);
    Pod::new(inst, vec![center], adj[center].iter().copied())
}

/// The merged pod and the two separate pods of a diameter-3 tree.
fn diameter3_pods(inst: &Instance) -> Result<(Pod, [Pod; 2])> {
    let adj = inst.adjacency();
    let centers: Vec<VertexId> = (0..inst.vertex_count()).filter(|&v| adj[v].len() > 1).collect();
    let [a, b] = centers[..] else {
        return Err(Error::Internal("expected two centers".into()));
    };
    let leaves_of = |c: VertexId, other: VertexId| adj[c].iter().copied().filter(move |&v| v != other);
    let merged = Pod::new(inst, vec![a, b], leaves_of(a, b).chain(leaves_of(b, a)));
    let split = [
        Pod::new(inst, vec![a], leaves_of(a, b)),
        Pod::new(inst, vec![b], leaves_of(b, a)),
    ];
    Ok((merged, split))
}

fn finish(found: Option<Partition>, examined: u64) -> OracleResult {
    OracleResult {
        answer: found.is_some(),
        witness: found,
        partitions_examined: examined,
    }
}

/// Decides a tree of diameter at most two.
pub fn solve_star(inst: &Instance) -> Result<OracleResult> {
    let diameter = check_common(inst)?;
    if diameter > 2 {
        return Err(Error::UnsupportedShape(format!(
            "star solver needs diameter at most 2, got {diameter}"
        )));
    }
    let (found, examined) = solve_pods(inst, &[star_pod(inst)])?;
    Ok(finish(found, examined))
}

/// Decides a tree of diameter exactly three, trying first partitions that
/// keep the central edge and then those that cut it.
pub fn solve_diameter3(inst: &Instance) -> Result<OracleResult> {
    let diameter = check_common(inst)?;
    if diameter != 3 {
        return Err(Error::UnsupportedShape(format!(
            "diameter-3 solver got diameter {diameter}"
        )));
    }
    let (merged, split) = diameter3_pods(inst)?;
    let (found, mut examined) = solve_pods(inst, &[merged])?;
    if found.is_some() {
        return Ok(finish(found, examined));
    }
    let (found, more) = solve_pods(inst, &split)?;
    examined += more;
    Ok(finish(found, examined))
}

/// Checks a single guess on a star or diameter-3 tree, assuming zero-weight
/// leaves stay inside center blocks. A feasible outcome carries a verified
/// partition.
pub fn check_guess(inst: &Instance, guess: &CaseGuess) -> Result<FeasibilityOutcome> {
    let diameter = check_common(inst)?;
    let pods = match (diameter, guess.case, guess.pods.len()) {
        (0..=2, GuessCase::Merged, 1) => vec![star_pod(inst)],
        (3, GuessCase::Merged, 1) => vec![diameter3_pods(inst)?.0],
        (3, GuessCase::Split, 2) => diameter3_pods(inst)?.1.to_vec(),
        _ => {
            return Err(Error::invalid(format!(
                "{:?} guess with {} pods does not fit a tree of diameter {diameter}",
                guess.case,
                guess.pods.len()
            )))
        }
    };
    let target = inst.target.index();
    let colors = inst.color_count();
    let mut scored = Vec::new();
    for (pod, g) in pods.iter().zip(&guess.pods) {
        let winner = g.q_star.index();
        let over = winner >= colors
            || g.alpha_p > pod.count(target)
            || (winner == target && g.alpha_qstar != 0)
            || (winner != target && g.alpha_qstar > pod.count(winner));
        if over {
            return Err(Error::invalid(format!("guess {g:?} exceeds the available leaves")));
        }
        scored.push(score(pod, target, *g));
    }
    let choice: Vec<&Scored> = scored.iter().collect();
    let x = choice.iter().map(|s| s.x).sum();
    let mut beta = BTreeMap::new();
    for q in (0..colors).filter(|&q| q != target) {
        let sum = choice.iter().filter(|s| s.winner() != q).map(|s| s.slack[q].beta).sum();
        beta.insert(ColorId(q), sum);
    }
    let positive: usize = pods.iter().map(Pod::positive_leaves).sum();
    let partition = match inst.k.checked_sub(pods.len()) {
        Some(free) if free <= positive => match combine(&choice, target, colors, free) {
            Some(ranges) => {
                let removed = allocate(&choice, &ranges, target, free);
                Some(verified(inst, build_partition(&pods, &choice, &removed, target))?)
            }
            None => None,
        },
        _ => None,
    };
    Ok(FeasibilityOutcome {
        feasible: partition.is_some(),
        x,
        beta,
        partition,
    })
}
