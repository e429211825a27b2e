"""Regenerates fixtures/planners/*.json. Run from the repository root."""
import json
import os

LINKISH = ["link", "push-button", "button"]
FIELD = ["entry", "textbox"]
BUTTON = ["push-button", "button"]


def cookies():
    return {"op": "cookies"}


def click(targets, types=None, note=""):
    s = {"op": "click", "targets": targets}
    if types:
        s["types"] = types
    if note:
        s["note"] = note
    return s


def type_(targets, text, types=FIELD, note=""):
    s = {"op": "type", "targets": targets, "text": text, "types": types}
    if note:
        s["note"] = note
    return s


def hotkey(keys, note=""):
    return {"op": "hotkey", "keys": keys, "note": note}


def press(key, note=""):
    return {"op": "press", "keys": [key], "note": note}


TASKS = {
    "weather-forecast": ("Open the 10-day weather forecast for Boston", [
        cookies(),
        type_(["the city search field at the top of the weather site", "a search box to look up a city or zip code"],
              "Boston\n", note="Type the city name"),
        cookies(),
        click(["the '10 Day' forecast tab", "a link to the 10 day forecast"], ["link"], "Open the 10 day forecast"),
    ]),
    "recipe-search": ("Find a vegetarian lasagna recipe", [
        cookies(),
        type_(["the recipe search field", "a search box for recipes"], "vegetarian lasagna\n", note="Search for the recipe"),
        cookies(),
        click(["the search result for a vegetarian lasagna recipe", "a link to a vegetarian lasagna with spinach recipe"],
              ["link"], "Open the vegetarian lasagna recipe"),
    ]),
    "flights-search": ("Search for flights from Boston to Denver", [
        cookies(),
        type_(["the flight search field", "a search box to search flights"], "Boston to Denver\n", note="Enter the route"),
    ]),
    "library-hours": ("Find the opening hours of the central library", [
        cookies(),
        click(["a link to the library hours and locations", "the hours and locations page link"], ["link"],
              "Open hours and locations"),
    ]),
    "hotel-reviews": ("Read guest reviews for the Harbor View Hotel", [
        cookies(),
        click(["the Harbor View Hotel listing link", "a link to the Harbor View Hotel"], ["link"], "Open the hotel"),
        cookies(),
        click(["the guest reviews tab", "a link to guest reviews"], ["link"], "Open guest reviews"),
    ]),
    "news-archive": ("Open the news archive for March 2024", [
        cookies(),
        click(["the Archive link in the site navigation", "a link to the news archive"], ["link"], "Open the archive"),
        click(["the March 2024 link in the archive", "a link to the March 2024 archive"], ["link"], "Open March 2024"),
    ]),
    "wiki-search": ("Look up the Wikipedia article about photosynthesis", [
        hotkey(["CTRL", "L"], "Focus the address bar"),
        {"op": "type", "targets": [], "text": "photosynthesis wikipedia\n", "note": "Search the web"},
        cookies(),
        click(["the Photosynthesis Wikipedia search result", "a link to the Wikipedia article on photosynthesis"],
              ["link"], "Open the Wikipedia article"),
    ]),
    "gimp-flip": ("Flip the image horizontally in GIMP", [
        click(["the Image menu in the GIMP menu bar", "a menu named Image"], LINKISH, "Open the Image menu"),
        click(["the Flip Horizontally menu item", "a menu entry to flip the image horizontally"], LINKISH, "Flip horizontally"),
    ]),
    "calc-autosum": ("Sum column B in the spreadsheet with AutoSum", [
        click(["the AutoSum button in the toolbar", "a toolbar button for AutoSum"], LINKISH, "Insert AutoSum"),
        press("ENTER", "Confirm the formula"),
    ]),
    "impress-new-slide": ("Add a new slide to the presentation", [
        click(["the New Slide toolbar button", "a button to insert a new slide"], LINKISH, "Add a slide"),
    ]),
    "writer-bold": ("Make the selected text bold in the document", [
        hotkey(["CTRL", "B"], "Bold the selection"),
    ]),
    "vlc-open": ("Open the file dialog in VLC to play a media file", [
        click(["the Media menu in VLC", "a menu named Media"], LINKISH, "Open the Media menu"),
        click(["the Open File menu item", "a menu entry to open a file"], LINKISH, "Open a file"),
    ]),
    "vscode-terminal": ("Open a new terminal in VS Code", [
        click(["the Terminal menu in the menu bar", "a menu named Terminal"], LINKISH, "Open the Terminal menu"),
        click(["the New Terminal menu item", "a menu entry to open a new terminal"], LINKISH, "Open a new terminal"),
    ]),
    "thunderbird-compose": ("Start writing a new email in Thunderbird", [
        click(["the Write button in the Thunderbird toolbar", "a button to write a new message"], LINKISH, "Compose"),
    ]),
    "os-settings": ("Open the system Settings", [
        click(["the Settings icon in the dock", "a launcher icon for system Settings"], LINKISH, "Open Settings"),
    ]),
    "multi-apps-paste": ("Paste the copied table into a new email in Thunderbird", [
        click(["the Thunderbird Mail icon in the dock", "a launcher icon for Thunderbird"], LINKISH, "Open Thunderbird"),
        click(["the Write button in the Thunderbird toolbar", "a button to write a new message"], LINKISH, "Compose"),
        hotkey(["CTRL", "V"], "Paste the table"),
    ]),
    "natural-products": ("Browse the natural products database", [
        cookies(),
        type_(["the website's internal search box in the header", "a search input field on this site"],
              "natural products database\n", note="Search the site"),
        cookies(),
        click(["a search result link for the natural products database", "a link that leads to a natural products database"],
              ["link"], "Open the natural products database"),
        click(["a link or button to Browse the database", "a navigation element for browsing database entries"],
              LINKISH, "Open the browse interface"),
    ]),
}

DEFAULT_VARIANTS = [
    {"style": "visual-first", "phrasing": 0},
    {"style": "dom-first", "phrasing": 0},
    {"style": "visual-first", "phrasing": 1},
    {"style": "visual-only", "phrasing": 0},
    {"style": "dom-only", "phrasing": 0},
]

VARIANTS = {
    "natural-products": [
        {"plan": "plans/natural_products_g1.plan"},
        {"plan": "plans/natural_products_g2.plan"},
        {"style": "visual-first", "phrasing": 0},
        {"style": "dom-first", "phrasing": 0},
        {"style": "visual-only", "phrasing": 0},
    ],
    # Detection-rate fixtures: six screenshot-led plans, four DOM-led.
    "weather-forecast": [{"style": "visual-first", "phrasing": p} for p in range(6)] +
                        [{"style": "dom-first", "phrasing": p} for p in range(4)],
    "recipe-search": [{"style": "visual-first", "phrasing": p} for p in range(5)] +
                     [{"style": "dom-first", "phrasing": p} for p in range(5)],
}


def q(s):
    return json.dumps(s)


def fides_turns(task, steps):
    """One straight-line statement per turn; consent handling is left out."""
    out = []
    n = 0
    for s in steps:
        op = s["op"]
        if op == "cookies":
            continue
        if op == "hotkey":
            keys = ", ".join("Key." + k for k in s["keys"])
            out.append(f"hotkey(keys=[{keys}], instruction={q(s.get('note') or 'Keyboard shortcut')})")
            out.append("wait()")
            continue
        if op == "press":
            out.append(f"press(Key.{s['keys'][0]}, instruction={q(s.get('note') or 'Press a key')})")
            out.append("wait()")
            continue
        if op == "type" and not s["targets"]:
            out.append(f"type_text(text={q(s['text'])}, instruction={q(s.get('note') or 'Type the query')})")
            out.append("wait()")
            continue
        n += 1
        out.append(f"r{n} = find(Instruction(text={q(s['targets'][0])}, length=150))")
        out.append(f"a{n} = left_single(r{n}.start, {q(s.get('note') or 'Click')})")
        out.append("wait()")
        if op == "type":
            out.append(f"type_text(text={q(s['text'])}, instruction={q(s.get('note') or 'Type into the field')})")
            out.append("wait()")
    out.append(f"done = check_done(Instruction(text={q(task)}, length=200))")
    out.append("mark_done()")
    return out


def main():
    os.makedirs("fixtures/planners", exist_ok=True)
    for task_id, (task, steps) in sorted(TASKS.items()):
        lib = {
            "task_id": task_id,
            "task": task,
            "recipe": {"task": task, "steps": steps},
            "variants": VARIANTS.get(task_id, DEFAULT_VARIANTS),
            "fides": [fides_turns(task, steps)],
        }
        with open(f"fixtures/planners/{task_id}.json", "w") as f:
            json.dump(lib, f, indent=2)
            f.write("\n")


if __name__ == "__main__":
    main()
