//! Deterministic generator for the bundled synthetic fixture corpus.
//!
//! Regenerate with:
//!
//! ```bash
//! cargo run -p stancekit-cli --example gen_fixture -- fixtures 10000 1
//! ```
//!
//! The corpus plants structure for every pipeline stage: stance-indicative
//! hashtags on ~8% of tweets, stance-correlated keywords for the learned
//! classifier, five disjoint-ish topic vocabularies for LDA, sentiment
//! words, time-varying politician mentions, a post-event stance shift, and
//! bot scores skewed by stance. A few malformed and duplicate lines
//! exercise the rejects report.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

const MONTHS: &[(i32, u32)] = &[
    (2016, 1), (2016, 2), (2016, 3), (2016, 4), (2016, 5), (2016, 6), (2016, 7), (2016, 8),
    (2016, 9), (2016, 10), (2016, 11), (2016, 12), (2017, 1), (2017, 2), (2017, 3), (2017, 4),
    (2017, 5), (2017, 6), (2017, 7), (2017, 8), (2017, 9), (2017, 10), (2017, 11), (2017, 12),
    (2018, 1), (2018, 2), (2018, 3), (2018, 4), (2018, 5), (2018, 6), (2018, 7), (2018, 8),
    (2018, 9),
];

const TOPIC_WORDS: &[&[&str]] = &[
    &["market", "trade", "economy", "tariff", "export", "business", "growth", "investment", "pound", "finance", "deal", "customs"],
    &["border", "immigration", "migrant", "visa", "passport", "citizen", "movement", "control", "frontier", "asylum", "worker", "permit"],
    &["referendum", "ballot", "campaign", "debate", "poll", "turnout", "election", "mandate", "petition", "democracy", "voter", "count"],
    &["parliament", "minister", "cabinet", "party", "leader", "speech", "motion", "commons", "policy", "government", "bill", "opposition"],
    &["weather", "football", "music", "holiday", "coffee", "morning", "weekend", "friend", "garden", "dinner", "cinema", "train"],
];

const REMAIN_WORDS: &[&str] = &["together", "stronger", "european", "cooperation", "membership", "unity", "partnership", "solidarity"];
const LEAVE_WORDS: &[&str] = &["independence", "sovereignty", "takeback", "freedom", "unshackle", "globaltrade", "ourlaws", "ourmoney"];
const NEUTRAL_FILLER: &[&str] = &["today", "really", "think", "people", "country", "question", "story", "point", "update", "thread", "news", "view"];

const REMAIN_TAGS: &[&str] = &["voteremain", "strongerin", "stopbrexit", "fbpe", "remain", "betteroffin"];
const LEAVE_TAGS: &[&str] = &["voteleave", "takebackcontrol", "leaveeu", "beleave", "voteout", "britainout"];
const AMBIGUOUS_TAGS: &[&str] = &["euref", "eureferendum"];

const POSITIVE_WORDS: &[&str] = &["great", "hope", "love", "win", "proud", "success", "happy"];
const NEGATIVE_WORDS: &[&str] = &["disaster", "fear", "lie", "mess", "worry", "fail", "crisis"];

const POLITICIANS: &[&str] = &["pm_alice", "pm_helen", "mp_jacob", "mp_nora", "mp_victor", "mp_priya"];
const NEWS: &[&str] = &["daily_wire_uk", "metro_desk", "channel_nine"];
const CAMPAIGNS: &[&str] = &["in_together_hq", "out_and_proud", "future_forward"];

#[derive(Clone, Copy, PartialEq)]
enum Stance {
    Remain,
    Leave,
    Neutral,
}

struct User {
    id: String,
    pre: Stance,
    post: Stance,
    followers: Option<u64>,
    weight: f64,
}

fn month_weight(index: usize) -> f64 {
    // Interest ramps into mid-2016, spikes at the vote, and settles higher
    // than it began.
    let referendum = 5.0; // 2016-06
    let distance = (index as f64 - referendum).abs();
    1.0 + 2.5 * (-distance * distance / 8.0).exp() + 0.3 * (index as f64 / 33.0)
}

/// Handle popularity schedules: a handover mid-2016 and a challenger rising
/// through 2017.
fn handle_weight(handle: &str, month_index: usize) -> f64 {
    let t = month_index as f64;
    match handle {
        "pm_alice" => if month_index < 6 { 6.0 } else { 1.0 },
        "pm_helen" => if month_index < 6 { 0.5 } else { 5.0 },
        "mp_jacob" => 0.5 + if month_index >= 18 { 4.0 } else { 0.0 },
        "mp_nora" => 2.0,
        "mp_victor" => 3.0 - t * 0.05,
        "mp_priya" => 1.0 + t * 0.08,
        "daily_wire_uk" => 2.0,
        "metro_desk" => 1.5,
        "channel_nine" => 1.0,
        "in_together_hq" => if month_index < 8 { 3.0 } else { 0.8 },
        "out_and_proud" => if month_index < 8 { 3.0 } else { 1.0 },
        "future_forward" => 0.5 + t * 0.05,
        _ => 1.0,
    }
}

fn pick<'a, R: Rng>(rng: &mut R, pool: &[&'a str]) -> &'a str {
    pool[rng.gen_range(0..pool.len())]
}

fn make_users(rng: &mut ChaCha8Rng, count: usize) -> Vec<User> {
    (0..count)
        .map(|i| {
            let roll: f64 = rng.gen();
            let pre = if roll < 0.40 {
                Stance::Remain
            } else if roll < 0.75 {
                Stance::Leave
            } else {
                Stance::Neutral
            };
            // Post-event drift: leavers flip more often than remainers.
            let post = match pre {
                Stance::Leave if rng.gen::<f64>() < 0.25 => Stance::Remain,
                Stance::Remain if rng.gen::<f64>() < 0.10 => Stance::Leave,
                other => other,
            };
            User {
                id: format!("u{i:04}"),
                pre,
                post,
                followers: (rng.gen::<f64>() < 0.7).then(|| (rng.gen::<f64>().powi(3) * 50_000.0) as u64),
                // Heavy tail: most users post once or twice.
                weight: rng.gen::<f64>().powi(4) + 0.01,
            }
        })
        .collect()
}

struct Tweet {
    id: String,
    user: usize,
    month_index: usize,
    text: String,
    lang: &'static str,
    retweets: u64,
    likes: u64,
}

fn make_text(rng: &mut ChaCha8Rng, stance: Stance, long: bool) -> String {
    let topic = if stance == Stance::Neutral && rng.gen::<f64>() < 0.5 {
        4 // everyday-life pool
    } else {
        rng.gen_range(0..4)
    };
    let word_count = if long { rng.gen_range(12..=20) } else { rng.gen_range(4..=11) };
    let mut words: Vec<&str> = Vec::with_capacity(word_count + 3);
    for _ in 0..word_count {
        let roll: f64 = rng.gen();
        if roll < 0.55 {
            words.push(pick(rng, TOPIC_WORDS[topic]));
        } else if roll < 0.75 {
            words.push(pick(rng, NEUTRAL_FILLER));
        } else {
            match stance {
                Stance::Remain => words.push(pick(rng, REMAIN_WORDS)),
                Stance::Leave => words.push(pick(rng, LEAVE_WORDS)),
                Stance::Neutral => words.push(pick(rng, NEUTRAL_FILLER)),
            }
        }
    }
    // Sentiment flavour on roughly half the tweets.
    if rng.gen::<f64>() < 0.3 {
        words.push(pick(rng, POSITIVE_WORDS));
    } else if rng.gen::<f64>() < 0.3 {
        words.push(pick(rng, NEGATIVE_WORDS));
    }
    words.shuffle(rng);
    let mut text = words.join(" ");
    // ~8% of tweets carry a stance-indicative hashtag; a further handful
    // carry only ambiguous tags.
    let tag_roll: f64 = rng.gen();
    if tag_roll < 0.08 {
        let tag = match stance {
            Stance::Remain => pick(rng, REMAIN_TAGS),
            Stance::Leave => pick(rng, LEAVE_TAGS),
            Stance::Neutral => {
                if rng.gen::<bool>() {
                    pick(rng, REMAIN_TAGS)
                } else {
                    pick(rng, LEAVE_TAGS)
                }
            }
        };
        let _ = write!(text, " #{tag}");
    } else if tag_roll < 0.13 {
        let _ = write!(text, " #{}", pick(rng, AMBIGUOUS_TAGS));
    }
    text
}

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let out_dir = args.get(1).map(String::as_str).unwrap_or("fixtures");
    let tweet_count: usize = args.get(2).map(|s| s.parse().expect("tweet count")).unwrap_or(10_000);
    let seed: u64 = args.get(3).map(|s| s.parse().expect("seed")).unwrap_or(1);

    let out = Path::new(out_dir);
    fs::create_dir_all(out).expect("create fixture dir");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let users = make_users(&mut rng, tweet_count / 8);
    let user_weights: Vec<f64> = users.iter().map(|u| u.weight).collect();
    let month_weights: Vec<f64> = (0..MONTHS.len()).map(month_weight).collect();
    let all_handles: Vec<&str> = POLITICIANS.iter().chain(NEWS).chain(CAMPAIGNS).copied().collect();

    // Tweets.
    let mut tweets = Vec::with_capacity(tweet_count);
    let mut monthly_en_counts = vec![0u64; MONTHS.len()];
    for i in 0..tweet_count {
        let user = sample_weighted(&mut rng, &user_weights);
        let month_index = sample_weighted(&mut rng, &month_weights);
        let event_passed = month_index > 5; // referendum month is 2016-06
        let stance = if event_passed { users[user].post } else { users[user].pre };

        let lang_roll: f64 = rng.gen();
        let lang = if lang_roll < 0.85 {
            "en"
        } else if lang_roll < 0.92 {
            "fr"
        } else if lang_roll < 0.97 {
            "de"
        } else {
            "es"
        };

        let long = rng.gen::<f64>() < 0.45;
        let mut text = make_text(&mut rng, stance, long);
        if rng.gen::<f64>() < 0.18 {
            let weights: Vec<f64> = all_handles.iter().map(|h| handle_weight(h, month_index)).collect();
            let handle = all_handles[sample_weighted(&mut rng, &weights)];
            text.push_str(&format!(" @{handle}"));
        }

        let rt_roll: f64 = rng.gen();
        let retweets = if rt_roll < 0.60 {
            rng.gen_range(0..3)
        } else if rt_roll < 0.82 {
            rng.gen_range(3..10)
        } else {
            rng.gen_range(10..250)
        };
        let likes = (retweets as f64 * rng.gen_range(0.8..3.0)) as u64 + rng.gen_range(0..5);
        // Engagement trends upward over the corpus span.
        let retweets = retweets + (month_index as u64) / 8;

        if lang == "en" {
            monthly_en_counts[month_index] += 1;
        }
        tweets.push(Tweet {
            id: format!("t{i:06}"),
            user,
            month_index,
            text,
            lang,
            retweets,
            likes,
        });
    }

    // Corpus JSONL with a few planted rejects.
    let mut corpus = String::new();
    for (i, tweet) in tweets.iter().enumerate() {
        let (year, month) = MONTHS[tweet.month_index];
        let day = rng.gen_range(1..=28);
        let hour = rng.gen_range(0..24);
        let minute = rng.gen_range(0..60);
        let user = &users[tweet.user];
        let mut record = serde_json::json!({
            "id": tweet.id,
            "user_id": user.id,
            "created_at": format!("{year:04}-{month:02}-{day:02}T{hour:02}:{minute:02}:00Z"),
            "text": tweet.text,
            "lang": tweet.lang,
            "retweet_count": tweet.retweets,
            "like_count": tweet.likes,
        });
        if let Some(f) = user.followers {
            record["user_followers"] = serde_json::json!(f);
        }
        corpus.push_str(&serde_json::to_string(&record).unwrap());
        corpus.push('\n');
        // Rejects: three malformed lines and two duplicate ids.
        if i == 1000 || i == 5000 || i == 9000 {
            corpus.push_str("{this line is not valid json\n");
        }
        if i == 2000 || i == 7000 {
            let dup = corpus.lines().nth(10).unwrap().to_string();
            corpus.push_str(&dup);
            corpus.push('\n');
        }
    }
    fs::write(out.join("synthetic_10k.jsonl"), corpus).expect("write corpus");

    // Labeled training data, 200 rows per class.
    let mut labels = String::from("tweet_id,text,label\n");
    for i in 0..600 {
        let (stance, label) = match i % 3 {
            0 => (Stance::Remain, "remain"),
            1 => (Stance::Leave, "leave"),
            _ => (Stance::Neutral, "none"),
        };
        let text = make_text(&mut rng, stance, true).replace(['"', ','], " ");
        let _ = writeln!(labels, "l{i:04},{text},{label}");
    }
    fs::write(out.join("labels.csv"), labels).expect("write labels");

    // Bot scores for ~75% of users; leavers skew high.
    let mut bots = String::from("user_id,score\n");
    for user in &users {
        if rng.gen::<f64>() < 0.75 {
            let u: f64 = rng.gen();
            let score = match user.pre {
                Stance::Leave => u.powf(0.45),
                Stance::Remain => u.powf(2.2),
                Stance::Neutral => u,
            };
            let _ = writeln!(bots, "{},{:.3}", user.id, score);
        }
    }
    fs::write(out.join("bot_scores.csv"), bots).expect("write bot scores");

    // Mention categories.
    let mut categories = String::from("handle,category\n");
    for handle in POLITICIANS {
        let _ = writeln!(categories, "{handle},politician");
    }
    for handle in NEWS {
        let _ = writeln!(categories, "{handle},news");
    }
    for handle in CAMPAIGNS {
        let _ = writeln!(categories, "{handle},campaign_party");
    }
    fs::write(out.join("categories.csv"), categories).expect("write categories");

    // External trend series tracking English tweet volume with noise.
    let mut trend = String::from("month,value\n");
    for (index, (year, month)) in MONTHS.iter().enumerate() {
        let noise = 1.0 + 0.15 * (rng.gen::<f64>() - 0.5);
        let value = monthly_en_counts[index] as f64 * 3.7 * noise + 40.0;
        let _ = writeln!(trend, "{year:04}-{month:02},{value:.1}");
    }
    fs::write(out.join("trend.csv"), trend).expect("write trend");

    println!(
        "wrote {} tweets ({} users) plus labels, bot scores, categories, trend into {}",
        tweet_count,
        users.len(),
        out.display()
    );
}

fn sample_weighted(rng: &mut ChaCha8Rng, weights: &[f64]) -> usize {
    let total: f64 = weights.iter().sum();
    let mut draw = rng.gen::<f64>() * total;
    for (i, w) in weights.iter().enumerate() {
        draw -= w;
        if draw <= 0.0 {
            return i;
        }
    }
    weights.len() - 1
}
