//! Straight-line re-implementation of the four clock and election
//! transitions, sharing no code with the library. Used as a brute-force
//! oracle.

#![allow(dead_code)]

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Agent {
    pub second: u32,
    pub minute: u32,
    pub hour: u64,
    pub leader: bool,
    pub level: u32,
    pub tick: bool,
    /// Hour went up; tick is raised at the next qualifying interaction.
    pub pending: bool,
}

#[derive(Debug, Clone, Copy)]
pub struct Params {
    pub s: u32,
    pub m: u32,
    pub ell_max: u32,
    pub literal: bool,
}

/// Phase clock driven by a coin.
pub fn coin_clock(mut u: Agent, v: Agent, heads: bool, p: &Params) -> (Agent, Agent) {
    if heads {
        u.second += 1;
    } else {
        u.second = 0;
    }
    if u.second == p.s {
        u.minute += 1;
        u.second = 0;
    }
    if u.minute == p.m {
        u.hour += 1;
        u.minute = 0;
    }
    if u.hour < v.hour {
        u.hour = v.hour;
        u.minute = 0;
        u.second = 0;
    }
    if u.hour == v.hour && u.minute < v.minute {
        u.minute = v.minute;
        u.second = 0;
    }
    (u, v)
}

/// Phase clock driven by the random role order.
pub fn ordered_clock(mut u: Agent, mut v: Agent, p: &Params) -> (Agent, Agent) {
    u.second += 1;
    v.second = 0;
    if u.second == p.s {
        u.minute += 1;
        u.second = 0;
    }
    if u.minute == p.m {
        u.hour += 1;
        u.minute = 0;
    }
    if u.hour < v.hour {
        u.hour = v.hour;
        u.minute = 0;
        u.second = 0;
    }
    if u.hour == v.hour && u.minute < v.minute {
        u.minute = v.minute;
        u.second = 0;
    }
    (u, v)
}

/// Coin-mode leader election with its embedded clock. The same coin drives
/// the clock and the level flip.
pub fn coin_leader(mut u: Agent, mut v: Agent, heads: bool, p: &Params) -> (Agent, Agent) {
    // a tick raised at the first initiator interaction of the new epoch
    if u.pending {
        u.pending = false;
        u.tick = true;
    }
    let hour_before = u.hour;
    let (nu, nv) = coin_clock(u, v, heads, p);
    u = nu;
    v = nv;
    if u.hour != hour_before {
        u.pending = true;
    }

    if u.level < v.level {
        u.leader = false;
        u.level = v.level;
    }
    if u.tick && u.leader {
        u.tick = false;
        if heads {
            u.level = if u.level + 1 < p.ell_max { u.level + 1 } else { p.ell_max };
        }
    }
    if v.leader && u.leader {
        if p.literal {
            u.leader = false;
        } else if u.level > v.level {
            v.leader = false;
            v.level = u.level;
        } else {
            // lower or equal: the initiator steps down
            u.leader = false;
            u.level = v.level;
        }
    }
    (u, v)
}

/// Ordered-mode leader election with its embedded clock.
pub fn ordered_leader(mut u: Agent, mut v: Agent, p: &Params) -> (Agent, Agent) {
    // a tick raised one interaction after the epoch began, in either role
    if u.pending {
        u.pending = false;
        u.tick = true;
    }
    if v.pending {
        v.pending = false;
        v.tick = true;
    }
    let (hu, hv) = (u.hour, v.hour);
    let (nu, nv) = ordered_clock(u, v, p);
    u = nu;
    v = nv;
    if u.hour != hu {
        u.pending = true;
    }
    if v.hour != hv {
        v.pending = true;
    }

    if u.level < v.level {
        u.leader = false;
        u.level = v.level;
    }
    if u.tick && u.leader {
        u.tick = false;
        u.level = if u.level + 1 < p.ell_max { u.level + 1 } else { p.ell_max };
    }
    if v.tick {
        v.tick = false;
    }
    if v.leader && u.leader {
        if p.literal {
            v.leader = false;
        } else if u.level < v.level {
            u.leader = false;
            u.level = v.level;
        } else {
            // higher or equal: the responder steps down
            v.leader = false;
            v.level = u.level;
        }
    }
    (u, v)
}
