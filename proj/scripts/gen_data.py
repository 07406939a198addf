#!/usr/bin/env python3
# SPDX-License-Identifier: Apache-2.0
"""Regenerates the bundled corpora, scripts, observation fixtures and suites.

Output is deterministic; rerun after editing the tables below.
"""
import json
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
DATA = ROOT / "data"


EXAMPLES = {"string": "Lisbon", "integer": 3, "number": 38.72, "boolean": True}


def prop(kind, desc, **extra):
    p = {"type": kind, "description": desc}
    p.update(extra)
    p.setdefault("example_value", extra.get("enum", [EXAMPLES[kind]])[0])
    return p


def toolbench_description(name, description):
    # ToolBench wraps every function description in this boilerplate.
    group = name.split("_for_")[-1] if "_for_" in name else name.rsplit("_", 1)[0]
    return (f'This is the subfunction for tool "{group}", you can use this tool.'
            f'The description of this function is: "{description}"')


def tool(name, category, description, props, required):
    return {
        "name": name,
        "description": toolbench_description(name, description),
        "category": category,
        "parameters": {"type": "object", "properties": props, "required": required},
    }


S, I, N, B = "string", "integer", "number", "boolean"

SAMPLE = [
    tool("get_current_weather_for_weatherapi", "Weather",
         "Returns current conditions (temperature, humidity, wind, precipitation) for a city name, "
         "postal code or latitude/longitude pair.",
         {"q": prop(S, "City name, postal code or 'lat,lon'."),
          "units": prop(S, "Measurement system.", enum=["metric", "imperial"])}, ["q"]),
    tool("get_5_day_forecast_for_openweather", "Weather",
         "Five day forecast in three hour steps for the requested location, including "
         "probability of precipitation.",
         {"city": prop(S, "City name, optionally followed by a country code."),
          "cnt": prop(I, "Number of three hour steps to return (max 40).")}, ["city"]),
    tool("air_quality_index_for_airvisual", "Weather",
         "Air quality index and main pollutant for the nearest monitoring station.",
         {"lat": prop(N, "Latitude."), "lon": prop(N, "Longitude.")}, ["lat", "lon"]),
    tool("convert_currency_for_exchangerate", "Finance",
         "Converts an amount between two ISO 4217 currencies using the latest mid-market rate.",
         {"from": prop(S, "Source currency code, e.g. USD."),
          "to": prop(S, "Target currency code, e.g. EUR."),
          "amount": prop(N, "Amount in the source currency.")}, ["from", "to", "amount"]),
    tool("get_stock_quote_for_alphavantage", "Finance",
         "Latest price, change and volume for a listed equity symbol.",
         {"symbol": prop(S, "Ticker symbol, e.g. MSFT.")}, ["symbol"]),
    tool("historical_prices_for_yahoo_finance", "Finance",
         "Daily open/high/low/close prices for a symbol between two dates.",
         {"symbol": prop(S, "Ticker symbol."),
          "start": prop(S, "Start date, YYYY-MM-DD."),
          "end": prop(S, "End date, YYYY-MM-DD.")}, ["symbol", "start", "end"]),
    tool("crypto_price_for_coingecko", "Finance",
         "Current price of a crypto asset in one or more fiat currencies.",
         {"ids": prop(S, "Comma separated coin ids, e.g. bitcoin,ethereum."),
          "vs_currencies": prop(S, "Comma separated fiat codes.")}, ["ids", "vs_currencies"]),
    tool("search_movies_for_tmdb", "Movies",
         "Searches the movie database by title and returns ids, release years and ratings.",
         {"query": prop(S, "Title or part of a title."),
          "year": prop(I, "Restrict to a release year."),
          "page": prop(I, "Result page, starting at 1.")}, ["query"]),
    tool("movie_details_for_tmdb", "Movies",
         "Full record for one movie: runtime, genres, cast summary and overview.",
         {"movie_id": prop(I, "Id from search_movies_for_tmdb.")}, ["movie_id"]),
    tool("streaming_availability_for_watchmode", "Movies",
         "Lists streaming services that carry a title in a given country.",
         {"title_id": prop(S, "Watchmode or IMDb id."),
          "region": prop(S, "Two letter country code.")}, ["title_id"]),
    tool("search_flights_for_skyscanner", "Travel",
         "Finds one-way or return flight offers between two airports for given dates.",
         {"origin": prop(S, "IATA code of the departure airport."),
          "destination": prop(S, "IATA code of the arrival airport."),
          "depart_date": prop(S, "YYYY-MM-DD."),
          "return_date": prop(S, "YYYY-MM-DD, omit for one-way."),
          "adults": prop(I, "Number of adult passengers.")},
         ["origin", "destination", "depart_date"]),
    tool("hotel_search_for_booking_com", "Travel",
         "Available hotels in a city for a stay, sorted by review score.",
         {"city": prop(S, "Destination city."),
          "checkin": prop(S, "YYYY-MM-DD."),
          "checkout": prop(S, "YYYY-MM-DD."),
          "guests": prop(I, "Number of guests.")}, ["city", "checkin", "checkout"]),
    tool("airport_info_for_aerodatabox", "Travel",
         "Name, location, timezone and runways of an airport.",
         {"iata": prop(S, "Three letter IATA code.")}, ["iata"]),
    tool("get_timezone_for_timezonedb", "Travel",
         "Timezone name, UTC offset and local time for coordinates.",
         {"lat": prop(N, "Latitude."), "lng": prop(N, "Longitude.")}, ["lat", "lng"]),
    tool("live_scores_for_api_football", "Sports",
         "Scores and minute-by-minute status of football matches in progress.",
         {"league": prop(I, "League id; omit for all leagues.")}, []),
    tool("team_statistics_for_api_football", "Sports",
         "Season statistics for a team in a league: wins, draws, goals, form.",
         {"team": prop(I, "Team id."), "league": prop(I, "League id."),
          "season": prop(I, "Four digit season year.")}, ["team", "league", "season"]),
    tool("nba_player_stats_for_balldontlie", "Sports",
         "Per-game averages of an NBA player for a season.",
         {"player_id": prop(I, "Player id."), "season": prop(I, "Season start year.")},
         ["player_id"]),
    tool("search_tracks_for_spotify", "Music",
         "Searches tracks by title, artist or album and returns ids and preview links.",
         {"q": prop(S, "Search text."), "limit": prop(I, "Maximum results (1-50).")}, ["q"]),
    tool("artist_top_tracks_for_spotify", "Music",
         "Ten most popular tracks of an artist in a market.",
         {"artist_id": prop(S, "Spotify artist id."), "market": prop(S, "Country code.")},
         ["artist_id"]),
    tool("song_lyrics_for_genius", "Music",
         "Lyrics and annotation count for a song.",
         {"song_id": prop(I, "Genius song id.")}, ["song_id"]),
    tool("top_headlines_for_newsapi", "News",
         "Breaking headlines by country and category.",
         {"country": prop(S, "Two letter country code."),
          "category": prop(S, "News category.",
                           enum=["business", "health", "science", "sports", "technology"])},
         []),
    tool("search_articles_for_newsapi", "News",
         "Full-text search across news articles from the last month.",
         {"q": prop(S, "Keywords or phrase."),
          "from": prop(S, "Oldest article date, YYYY-MM-DD."),
          "sort_by": prop(S, "Ordering.", enum=["relevancy", "popularity", "publishedAt"])},
         ["q"]),
    tool("translate_text_for_deepl", "Translation",
         "Translates text into a target language, detecting the source language if omitted.",
         {"text": prop(S, "Text to translate."),
          "target_lang": prop(S, "Target language code, e.g. DE."),
          "source_lang": prop(S, "Source language code.")}, ["text", "target_lang"]),
    tool("detect_language_for_google_translate", "Translation",
         "Detects the language of a text with a confidence score.",
         {"q": prop(S, "Text sample.")}, ["q"]),
    tool("geocode_address_for_mapbox", "Maps",
         "Turns a free-form address into coordinates and a normalized place name.",
         {"address": prop(S, "Address or place name."),
          "country": prop(S, "Limit to a country code.")}, ["address"]),
    tool("driving_directions_for_osrm", "Maps",
         "Route, distance and duration between two coordinates by car.",
         {"from_lat": prop(N, "Start latitude."), "from_lon": prop(N, "Start longitude."),
          "to_lat": prop(N, "End latitude."), "to_lon": prop(N, "End longitude.")},
         ["from_lat", "from_lon", "to_lat", "to_lon"]),
    tool("nearby_places_for_foursquare", "Maps",
         "Points of interest near coordinates, filtered by category keyword.",
         {"ll": prop(S, "'lat,lon'."), "query": prop(S, "Category keyword, e.g. coffee."),
          "radius": prop(I, "Search radius in meters.")}, ["ll"]),
    tool("send_email_for_sendgrid", "Communication",
         "Sends a plain text email from a verified sender.",
         {"to": prop(S, "Recipient address."), "subject": prop(S, "Subject line."),
          "body": prop(S, "Plain text body.")}, ["to", "subject", "body"]),
    tool("send_sms_for_twilio", "Communication",
         "Sends a text message to a phone number in E.164 format.",
         {"to": prop(S, "Destination number."), "message": prop(S, "Message text.")},
         ["to", "message"]),
    tool("validate_email_for_mailboxlayer", "Communication",
         "Checks syntax, MX records and deliverability of an email address.",
         {"email": prop(S, "Address to check.")}, ["email"]),
    tool("search_recipes_for_spoonacular", "Food",
         "Recipes matching a query with optional diet and max preparation time.",
         {"query": prop(S, "Dish or ingredient."),
          "diet": prop(S, "Diet filter, e.g. vegetarian."),
          "max_ready_time": prop(I, "Minutes.")}, ["query"]),
    tool("nutrition_facts_for_edamam", "Food",
         "Calories and macronutrients for an ingredient line such as '1 cup rice'.",
         {"ingr": prop(S, "Ingredient with quantity.")}, ["ingr"]),
    tool("restaurant_search_for_yelp", "Food",
         "Restaurants by location and cuisine with ratings and price level.",
         {"location": prop(S, "City or address."), "term": prop(S, "Cuisine or keyword."),
          "open_now": prop(B, "Only places open now.")}, ["location"]),
    tool("search_books_for_open_library", "Books",
         "Books by title or author with first publish year and edition count.",
         {"q": prop(S, "Title or author.")}, ["q"]),
    tool("book_details_for_google_books", "Books",
         "Volume information for an ISBN: authors, publisher, page count, description.",
         {"isbn": prop(S, "ISBN-10 or ISBN-13.")}, ["isbn"]),
    tool("random_joke_for_jokeapi", "Entertainment",
         "A random joke, optionally restricted to a category and filtered for safe content.",
         {"category": prop(S, "Joke category.", enum=["Programming", "Misc", "Pun"]),
          "safe_mode": prop(B, "Exclude offensive jokes.")}, []),
    tool("trivia_questions_for_opentdb", "Entertainment",
         "Multiple choice trivia questions by difficulty.",
         {"amount": prop(I, "Number of questions."),
          "difficulty": prop(S, "Difficulty.", enum=["easy", "medium", "hard"])}, ["amount"]),
    tool("search_repositories_for_github", "Developer",
         "Public repositories matching a query, sorted by stars.",
         {"q": prop(S, "Search keywords and qualifiers."),
          "per_page": prop(I, "Results per page.")}, ["q"]),
    tool("package_info_for_npm_registry", "Developer",
         "Latest version, license and weekly downloads of an npm package.",
         {"name": prop(S, "Package name.")}, ["name"]),
    tool("dns_lookup_for_networkcalc", "Developer",
         "DNS records of a domain.",
         {"domain": prop(S, "Domain name."),
          "type": prop(S, "Record type.", enum=["A", "AAAA", "MX", "TXT", "NS"])}, ["domain"]),
    tool("whois_lookup_for_whoisxml", "Developer",
         "Registrar, creation date and expiry of a domain.",
         {"domain": prop(S, "Domain name.")}, ["domain"]),
    tool("ip_geolocation_for_ipapi", "Developer",
         "Country, city and ISP for an IPv4 or IPv6 address.",
         {"ip": prop(S, "IP address.")}, ["ip"]),
    tool("define_word_for_wordsapi", "Education",
         "Definitions, part of speech and examples for an English word.",
         {"word": prop(S, "Word to define.")}, ["word"]),
    tool("wikipedia_summary_for_wikimedia", "Education",
         "Lead section summary of a Wikipedia article.",
         {"title": prop(S, "Article title."), "lang": prop(S, "Wiki language code.")},
         ["title"]),
    tool("solve_math_for_wolfram_alpha", "Education",
         "Evaluates a math expression or natural language question and returns a short answer.",
         {"input": prop(S, "Expression or question.")}, ["input"]),
    tool("public_holidays_for_nager_date", "Data",
         "Public holidays of a country in a year.",
         {"year": prop(I, "Four digit year."), "country_code": prop(S, "Two letter code.")},
         ["year", "country_code"]),
    tool("country_info_for_restcountries", "Data",
         "Capital, population, currencies and languages of a country.",
         {"name": prop(S, "Country name.")}, ["name"]),
    tool("generate_qr_code_for_goqr", "Utilities",
         "PNG QR code encoding a text or URL, returned as a download link.",
         {"data": prop(S, "Text to encode."), "size": prop(S, "Pixel size like 200x200.")},
         ["data"]),
    tool("shorten_url_for_bitly", "Utilities",
         "Shortened link for a long URL.",
         {"long_url": prop(S, "URL to shorten.")}, ["long_url"]),
    tool("unit_conversion_for_convertapi", "Utilities",
         "Converts a value between units of the same dimension.",
         {"value": prop(N, "Quantity."), "from_unit": prop(S, "Source unit."),
          "to_unit": prop(S, "Target unit.")}, ["value", "from_unit", "to_unit"]),
]

assert len(SAMPLE) == 50, len(SAMPLE)
assert len({t["name"] for t in SAMPLE}) == 50

# Ten task families, three near-duplicate providers each.
FAMILIES = [
    ("weather", "Weather", "current weather conditions", {"location": prop(S, "City or 'lat,lon'.")}),
    ("forecast", "Weather", "multi-day weather forecast", {"location": prop(S, "City or 'lat,lon'."),
                                                           "days": prop(I, "Days ahead (1-14).")}),
    ("currency", "Finance", "currency conversion at the latest rate",
     {"from": prop(S, "Source currency code."), "to": prop(S, "Target currency code."),
      "amount": prop(N, "Amount to convert.")}),
    ("stock", "Finance", "real-time stock quotes", {"symbol": prop(S, "Ticker symbol.")}),
    ("flights", "Travel", "flight offers between two airports",
     {"origin": prop(S, "Departure IATA code."), "destination": prop(S, "Arrival IATA code."),
      "date": prop(S, "YYYY-MM-DD.")}),
    ("hotels", "Travel", "hotel availability and prices",
     {"city": prop(S, "Destination city."), "checkin": prop(S, "YYYY-MM-DD."),
      "nights": prop(I, "Number of nights.")}),
    ("news", "News", "news headlines and articles", {"topic": prop(S, "Keywords."),
                                                     "language": prop(S, "Language code.")}),
    ("translate", "Translation", "machine translation of text",
     {"text": prop(S, "Text to translate."), "target": prop(S, "Target language code.")}),
    ("geocode", "Maps", "address to coordinate geocoding", {"address": prop(S, "Free-form address.")}),
    ("recipes", "Food", "recipe search with nutrition data", {"query": prop(S, "Dish or ingredient."),
                                                             "diet": prop(S, "Diet filter.")}),
]
PROVIDERS = [
    ("primary", "Reliable, well documented endpoint with generous rate limits"),
    ("lite", "Free tier endpoint with reduced accuracy and a small daily quota"),
    ("pro", "Commercial endpoint with extended history and premium data sources"),
]


def redundant_corpus():
    tools = []
    for family, category, what, props in FAMILIES:
        for provider, blurb in PROVIDERS:
            name = f"{family}_{provider}_api"
            desc = (f"{blurb}. Provides {what}; responses are JSON with a status field, "
                    f"the requested data and the provider's attribution string.")
            required = list(props)[:1] if provider == "lite" else list(props)
            full = dict(props)
            # Optional knobs most RapidAPI endpoints expose.
            full["response_format"] = prop(S, "Serialization of the response body.",
                                           enum=["json", "xml"])
            full["api_version"] = prop(S, "Provider API version to target; defaults to the "
                                          "latest stable release.", example_value="v2")
            full["request_id"] = prop(S, "Client supplied identifier echoed back in the "
                                         "response for tracing.", example_value="req-001")
            tools.append(tool(name, category, desc, full, required))
    return tools


PAIR = [
    tool("lookup_order_status", "Commerce",
         "Current fulfilment status, carrier and tracking number of an order.",
         {"order_id": prop(S, "Order identifier, e.g. A-1042.")}, ["order_id"]),
    tool("estimate_delivery_date", "Commerce",
         "Estimated delivery date for a tracking number and destination postal code.",
         {"tracking_number": prop(S, "Carrier tracking number."),
          "postal_code": prop(S, "Destination postal code.")}, ["tracking_number"]),
]

DEMO_NAMES = [
    "get_current_weather_for_weatherapi", "get_5_day_forecast_for_openweather",
    "convert_currency_for_exchangerate", "get_stock_quote_for_alphavantage",
    "search_movies_for_tmdb", "translate_text_for_deepl", "geocode_address_for_mapbox",
    "search_recipes_for_spoonacular",
]


def by_name(corpus):
    return {t["name"]: t for t in corpus}


def call(name, args, thought=""):
    return {"content": thought, "function_call": {"name": name, "arguments": json.dumps(args)}}


def register(names, thought=""):
    if len(names) == 1:
        return call("tool_register", {"function_name": names[0]}, thought)
    return call("tool_register", {"function_names": names}, thought)


def finish(answer, thought=""):
    return call("Finish", {"return_type": "give_answer", "final_answer": answer}, thought)


def give_up(thought="This path is not working."):
    return call("Finish", {"return_type": "give_up_and_restart"}, thought)


def turn_script(responses):
    return {"rules": [{"match": {"turn": i}, "response": r} for i, r in enumerate(responses)]}


def plan_scripts(plan, answer):
    """plan: list of (tool, args). Returns ecoact, eager and ecoact_multiple scripts."""
    ecoact, eager = [], []
    for tool_name, args in plan:
        ecoact.append(register([tool_name], f"I need {tool_name}."))
        ecoact.append(call(tool_name, args, f"Calling {tool_name}."))
        eager.append(call(tool_name, args, f"Calling {tool_name}."))
    ecoact.append(finish(answer, "I have what I need."))
    eager.append(finish(answer, "I have what I need."))
    multiple = [register([t for t, _ in plan], "Registering everything I need at once.")]
    multiple += [call(t, a, f"Calling {t}.") for t, a in plan]
    multiple.append(finish(answer, "I have what I need."))
    return turn_script(ecoact), turn_script(eager), turn_script(multiple)


def give_up_scripts(plan, answer):
    """First attempt gives up after the registrations; the retry succeeds."""
    marker = "Previous attempt failed"

    def with_branch(prefix, tail):
        rules = [{"match": {"turn": i}, "response": r} for i, r in enumerate(prefix)]
        b = len(prefix)
        for i, r in enumerate(tail):
            rules.append({"match": {"turn": b + i, "contains": marker}, "response": r})
        rules.append({"match": {"turn": b}, "response": give_up()})
        return {"rules": rules}

    regs = [register([t], f"I need {t}.") for t, _ in plan]
    calls = [call(t, a, f"Calling {t}.") for t, a in plan]
    ecoact = with_branch(regs, calls + [finish(answer, "Done.")])
    eager = with_branch([], calls + [finish(answer, "Done.")])
    return ecoact, eager


def observations(corpus_list):
    out = {}
    for t in corpus_list:
        out[t["name"]] = {"default": {"status": "ok", "source": t["name"],
                                      "data": f"sample result from {t['name']}"}}
    return out


def write(path, obj):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(obj, indent=2, ensure_ascii=False) + "\n")


def main():
    sample = SAMPLE
    redundant = redundant_corpus()
    demo = [by_name(sample)[n] for n in DEMO_NAMES]
    write(DATA / "corpora" / "sample50.json", sample)
    write(DATA / "corpora" / "redundant30.json", redundant)
    write(DATA / "corpora" / "pair2.json", PAIR)
    write(DATA / "corpora" / "demo.json", demo)

    obs = observations(sample + redundant + PAIR)
    obs["get_current_weather_for_weatherapi"]["cases"] = [
        {"arguments": {"q": "Lisbon", "units": "metric"},
         "response": {"location": "Lisbon, PT", "temp_c": 21.5, "condition": "Partly cloudy",
                      "humidity": 64, "wind_kph": 14.4}}]
    write(DATA / "observations" / "bundled.json", obs)

    demo_plan = [("get_current_weather_for_weatherapi", {"q": "Lisbon", "units": "metric"})]
    demo_answer = "It is 21.5 °C and partly cloudy in Lisbon right now."
    e, g, m = plan_scripts(demo_plan, demo_answer)
    write(DATA / "scripts" / "demo_ecoact.json", e)
    write(DATA / "scripts" / "demo_eager.json", g)

    sample_names = [t["name"] for t in sample]
    redundant_names = [t["name"] for t in redundant]

    entries = [
        ("q1_order_eta", "Where is my order A-1042 and when will it arrive at 10115?",
         "pair2.json", [],
         [("lookup_order_status", {"order_id": "A-1042"}),
          ("estimate_delivery_date", {"tracking_number": "1Z999", "postal_code": "10115"})],
         "Order A-1042 shipped with tracking 1Z999 and should arrive on 2024-05-14."),
        ("q2_trip_budget", "How much is 250 USD in EUR, and what's the weather in Lisbon?",
         "sample50.json", sample_names[:6],
         [("convert_currency_for_exchangerate", {"from": "USD", "to": "EUR", "amount": 250}),
          ("get_current_weather_for_weatherapi", {"q": "Lisbon", "units": "metric"})],
         "250 USD is about 231 EUR; Lisbon is 21.5 °C and partly cloudy."),
        ("q3_movie_night", "Find the 2010 movie Inception and tell me where to stream it in the US.",
         "sample50.json", sample_names[:15],
         [("search_movies_for_tmdb", {"query": "Inception", "year": 2010}),
          ("streaming_availability_for_watchmode", {"title_id": "tt1375666", "region": "US"})],
         "Inception (2010) is streaming on Max and available to rent on Prime Video."),
        ("q4_flight_plan", "Plan a flight from LHR to JFK on 2024-06-01, a hotel for two nights, "
                           "and tell me the local time at JFK.",
         "sample50.json", sample_names[:18],
         [("search_flights_for_skyscanner",
           {"origin": "LHR", "destination": "JFK", "depart_date": "2024-06-01"}),
          ("hotel_search_for_booking_com",
           {"city": "New York", "checkin": "2024-06-01", "checkout": "2024-06-03"}),
          ("get_timezone_for_timezonedb", {"lat": 40.6413, "lng": -73.7781})],
         "Cheapest LHR-JFK on 2024-06-01 is 412 GBP; Pod Times Square has rooms; JFK is UTC-4."),
        ("q5_market_brief", "Give me the AAPL quote, convert 1000 USD to JPY and top tech news.",
         "redundant30.json", [],
         [("stock_primary_api", {"symbol": "AAPL"}),
          ("currency_primary_api", {"from": "USD", "to": "JPY", "amount": 1000}),
          ("news_primary_api", {"topic": "technology", "language": "en"})],
         "AAPL trades at 189.20; 1000 USD is 156,300 JPY; top story: new chip export rules."),
        ("q6_weekend_trip", "Weather forecast for Porto this weekend, hotels for two nights, "
                            "and translate 'thank you' into Portuguese.",
         "redundant30.json", redundant_names[3:28],
         [("forecast_primary_api", {"location": "Porto", "days": 3}),
          ("hotels_primary_api", {"city": "Porto", "checkin": "2024-06-08", "nights": 2}),
          ("translate_primary_api", {"text": "thank you", "target": "pt"})],
         "Porto: sunny, 24 °C; Hotel Infante Sagres has rooms; 'thank you' is 'obrigado'."),
    ]

    suite_entries, restart_entries = [], []
    for qid, query, corpus_file, candidates, plan, answer in entries:
        e, g, m = plan_scripts(plan, answer)
        write(DATA / "scripts" / f"{qid}_ecoact.json", e)
        write(DATA / "scripts" / f"{qid}_eager.json", g)
        write(DATA / "scripts" / f"{qid}_ecoact_multiple.json", m)
        entry = {"query_id": qid, "query": query, "corpus": f"../corpora/{corpus_file}"}
        if candidates:
            entry["candidates"] = candidates
        entry["scripts"] = {"ecoact": f"../scripts/{qid}_ecoact.json",
                            "eager": f"../scripts/{qid}_eager.json",
                            "ecoact_multiple": f"../scripts/{qid}_ecoact_multiple.json"}
        entry["observations"] = "../observations/bundled.json"
        suite_entries.append(entry)

        if qid in ("q2_trip_budget", "q4_flight_plan", "q5_market_brief"):
            re, rg = give_up_scripts(plan, answer)
            rid = qid + "_retry"
            write(DATA / "scripts" / f"{rid}_ecoact.json", re)
            write(DATA / "scripts" / f"{rid}_eager.json", rg)
            r_entry = dict(entry)
            r_entry["query_id"] = rid
            r_entry["scripts"] = {"ecoact": f"../scripts/{rid}_ecoact.json",
                                  "eager": f"../scripts/{rid}_eager.json"}
            restart_entries.append(r_entry)

    judge = {"rules": [
        {"match": {"contains": "no final answer:"},
         "response": call("check_answer_status",
                          {"content": "The agent produced no answer.", "answer_status": "Unsolved"})},
        {"match": {"declares": "check_answer_status"},
         "response": call("check_answer_status",
                          {"content": "The answer addresses every part of the query.",
                           "answer_status": "Solved"})},
        {"match": {"declares": "parse_answer_status"},
         "response": call("parse_answer_status",
                          {"content": "Tool calls succeeded.", "answer_status": "Solved"})},
        {"match": {"declares": "check_task_solvable"},
         "response": call("check_task_solvable",
                          {"content": "The tools cover the request.", "task_status": "Solvable"})},
    ]}
    write(DATA / "scripts" / "judge.json", judge)

    write(DATA / "suites" / "hermetic6.json",
          {"suite_id": "hermetic6", "judge_script": "../scripts/judge.json",
           "entries": suite_entries})
    write(DATA / "suites" / "restarts.json",
          {"suite_id": "restarts", "judge_script": "../scripts/judge.json",
           "entries": restart_entries})


if __name__ == "__main__":
    main()
