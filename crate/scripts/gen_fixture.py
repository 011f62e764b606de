#!/usr/bin/env python3
"""Generate the bundled TOP-style fixture corpora.

Writes a 200-line training split and a 100-line held-out split of
synthetic task-oriented parses in decoupled form (3 columns:
domain, utterance, logical form). Output is deterministic.

    python3 scripts/gen_fixture.py crates/core/tests/fixtures
"""
import random
import sys
from pathlib import Path

PEOPLE = ["susan", "my mom", "jake", "the team", "grandma", "alex"]
PLACES = ["boston", "the office", "home", "the park", "seattle", "downtown"]
TIMES = ["tonight", "tomorrow morning", "at 5 pm", "this weekend", "on friday"]
EVENTS = ["concerts", "farmers markets", "yoga classes", "movies"]
TOPICS = ["the meeting", "dinner plans", "the report", "the trip"]
WEATHER = ["rain", "snow", "sunny", "hot"]


def leaf(rng, pool):
    return rng.choice(pool)


def slot(name, body):
    return f"[sl:{name} {body} ]"


def send_message(rng):
    parts = [slot("RECIPIENT", leaf(rng, PEOPLE))]
    if rng.random() < 0.6:
        parts.append(slot("CONTENT_EXACT", "about " + leaf(rng, TOPICS)))
    if rng.random() < 0.2:
        parts.append(slot("TYPE_CONTENT", "a text"))
    return "[in:SEND_MESSAGE " + " ".join(parts) + " ]"


def get_location(rng):
    inner = slot("CATEGORY_LOCATION", leaf(rng, ["the park", "a cafe", "the gym"]))
    if rng.random() < 0.3:
        inner += " " + slot("LOCATION_MODIFIER", "nearest")
    return "[in:GET_LOCATION " + inner + " ]"


def get_contact(rng):
    return "[in:GET_CONTACT " + slot("CONTACT_RELATED", "my") + " " + slot("TYPE_RELATION", "boss") + " ]"


def reminder(rng):
    parts = [slot("PERSON_REMINDED", "me")]
    r = rng.random()
    if r < 0.45:
        parts.append("[sl:TODO " + send_message(rng) + " ]")
    elif r < 0.6:
        parts.append("[sl:TODO " + "[in:GET_EVENT " + slot("CATEGORY_EVENT", leaf(rng, EVENTS)) + " ]" + " ]")
    else:
        parts.append(slot("TODO", "call " + leaf(rng, PEOPLE)))
    if rng.random() < 0.7:
        parts.append(slot("DATE_TIME", leaf(rng, TIMES)))
    if rng.random() < 0.1:
        parts.append(slot("RECURRING_DATE_TIME", "every day"))
    rng.shuffle(parts)
    intent = "CREATE_REMINDER" if rng.random() < 0.8 else "GET_REMINDER"
    return "reminder", f"[in:{intent} " + " ".join(parts) + " ]"


def weather(rng):
    parts = []
    if rng.random() < 0.5:
        parts.append(slot("WEATHER_ATTRIBUTE", leaf(rng, WEATHER)))
    if rng.random() < 0.7:
        if rng.random() < 0.25:
            parts.append("[sl:LOCATION " + get_location(rng) + " ]")
        else:
            parts.append(slot("LOCATION", leaf(rng, PLACES)))
    if rng.random() < 0.6:
        parts.append(slot("DATE_TIME", leaf(rng, TIMES)))
    if not parts:
        return "weather", "[in:GET_WEATHER ]"
    return "weather", "[in:GET_WEATHER " + " ".join(parts) + " ]"


def event(rng):
    parts = [slot("CATEGORY_EVENT", leaf(rng, EVENTS))]
    if rng.random() < 0.5:
        parts.append(slot("LOCATION", leaf(rng, PLACES)))
    if rng.random() < 0.5:
        parts.append(slot("DATE_TIME", leaf(rng, TIMES)))
    if rng.random() < 0.15:
        parts.append("[sl:ORGANIZER_EVENT " + get_contact(rng) + " ]")
    return "event", "[in:GET_EVENT " + " ".join(parts) + " ]"


def navigation(rng):
    parts = []
    if rng.random() < 0.3:
        parts.append("[sl:DESTINATION " + get_location(rng) + " ]")
    else:
        parts.append(slot("DESTINATION", leaf(rng, PLACES)))
    if rng.random() < 0.4:
        parts.append(slot("SOURCE", leaf(rng, PLACES)))
    if rng.random() < 0.3:
        parts.append(slot("METHOD_TRAVEL", "by car"))
    if rng.random() < 0.3:
        parts.append(slot("DATE_TIME_ARRIVAL", leaf(rng, TIMES)))
    intent = "GET_ESTIMATED_DURATION" if rng.random() < 0.5 else "GET_DIRECTIONS"
    return "navigation", f"[in:{intent} " + " ".join(parts) + " ]"


def messaging(rng):
    return "messaging", send_message(rng)


GENERATORS = [reminder, weather, event, navigation, messaging]


def utterance(lf):
    words = []
    for tok in lf.split():
        if tok.startswith("[") or tok == "]":
            continue
        words.append(tok)
    return " ".join(words) if words else "hello"


def generate(rng, n):
    lines = []
    for _ in range(n):
        domain, lf = rng.choice(GENERATORS)(rng)
        lines.append(f"{domain}\t{utterance(lf)}\t{lf}")
    return lines


def main():
    out = Path(sys.argv[1] if len(sys.argv) > 1 else ".")
    out.mkdir(parents=True, exist_ok=True)
    rng = random.Random(20221104)
    header = "domain\tutterance\tsemantic_parse"
    train = generate(rng, 200)
    test = generate(rng, 100)
    (out / "top_fixture_train.tsv").write_text("\n".join([header] + train) + "\n")
    (out / "top_fixture_test.tsv").write_text("\n".join([header] + test) + "\n")


if __name__ == "__main__":
    main()
