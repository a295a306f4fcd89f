from datetime import datetime, timezone

import pytest

from overlayjournal.checklist import (
    DEFAULT_TEMPLATE,
    ChecklistCategory,
    ChecklistItemDef,
    ChecklistTemplate,
    ReviewerChecklist,
    detect_fast_track,
    instantiate,
    is_complete,
    parse_markdown,
    render_markdown,
    set_item,
)
from overlayjournal.clocks import TickClock
from overlayjournal.errors import InvalidField, MissingItem, Unauthorized, UnknownItem

from .conftest import EDITOR, REVIEWER, REVIEWER2

CLOCK = TickClock(datetime(2017, 3, 1, tzinfo=timezone.utc))


def fresh():
    return instantiate(DEFAULT_TEMPLATE, REVIEWER, "S1")


class TestTemplate:
    def test_category_shape(self):
        names = [c.name for c in DEFAULT_TEMPLATE.categories]
        assert names == [
            "Conflict of interest",
            "Code of Conduct",
            "General checks",
            "Functionality",
            "Documentation",
            "Software paper",
        ]
        assert [len(c.items) for c in DEFAULT_TEMPLATE.categories] == [1, 1, 4, 3, 6, 3]
        assert DEFAULT_TEMPLATE.item_count() == 18

    def test_golden_render(self, fixtures_dir):
        golden = (fixtures_dir / "fresh_checklist.md").read_text(encoding="utf-8")
        assert render_markdown(fresh(), DEFAULT_TEMPLATE) == golden

    def test_duplicate_item_id_rejected(self):
        item = ChecklistItemDef("x", "X", "x?")
        with pytest.raises(InvalidField):
            ChecklistTemplate(
                categories=(
                    ChecklistCategory("A", (item,)),
                    ChecklistCategory("B", (item,)),
                )
            )

    def test_empty_prompt_rejected(self):
        with pytest.raises(InvalidField):
            ChecklistTemplate(
                categories=(ChecklistCategory("A", (ChecklistItemDef("x", "X", ""),)),)
            )

    def test_statement_of_need_appears_twice_with_distinct_ids(self):
        prompts = [
            (item.label, item.id)
            for category in DEFAULT_TEMPLATE.categories
            for item in category.items
            if item.label == "A statement of need"
        ]
        assert len(prompts) == 2
        assert prompts[0][1] != prompts[1][1]


class TestInstances:
    def test_fresh_is_all_unchecked(self):
        c = fresh()
        assert len(c.states) == 18
        assert not any(c.states.values())
        assert c.completed_at is None
        assert not is_complete(c)

    def test_two_reviewers_do_not_share_state(self):
        first = fresh()
        second = instantiate(DEFAULT_TEMPLATE, REVIEWER2, "S1")
        updated = set_item(first, "installation", True, REVIEWER, clock=CLOCK)
        assert updated.states["installation"]
        assert not second.states["installation"]
        assert not first.states["installation"]  # set_item is pure

    def test_completion_stamps_on_final_item(self):
        c = fresh()
        ids = DEFAULT_TEMPLATE.item_ids()
        for item_id in ids[:-1]:
            c = set_item(c, item_id, True, REVIEWER, clock=CLOCK)
            assert c.completed_at is None
        c = set_item(c, ids[-1], True, REVIEWER, clock=CLOCK)
        assert c.completed_at is not None
        assert is_complete(c)

    def test_uncheck_clears_completion(self):
        c = fresh()
        for item_id in DEFAULT_TEMPLATE.item_ids():
            c = set_item(c, item_id, True, REVIEWER, clock=CLOCK)
        c = set_item(c, "license", False, REVIEWER, clock=CLOCK)
        assert c.completed_at is None
        assert not is_complete(c)

    def test_editor_may_edit(self):
        c = set_item(fresh(), "license", True, EDITOR, clock=CLOCK)
        assert c.states["license"]

    def test_other_reviewer_may_not_edit(self):
        with pytest.raises(Unauthorized):
            set_item(fresh(), "license", True, REVIEWER2, clock=CLOCK)

    def test_unknown_item(self):
        with pytest.raises(UnknownItem):
            set_item(fresh(), "no-such-item", True, REVIEWER, clock=CLOCK)

    @pytest.mark.parametrize("unchecked_position", range(18))
    def test_single_unchecked_item_blocks_completion(self, unchecked_position):
        c = fresh()
        for position, item_id in enumerate(DEFAULT_TEMPLATE.item_ids()):
            if position != unchecked_position:
                c = set_item(c, item_id, True, REVIEWER, clock=CLOCK)
        assert not is_complete(c)

    def test_serialization_round_trip(self):
        c = set_item(fresh(), "license", True, REVIEWER, clock=CLOCK)
        assert ReviewerChecklist.from_dict(c.to_dict()) == c


class TestMarkdownRoundTrip:
    def test_fresh_round_trip(self):
        c = fresh()
        assert parse_markdown(render_markdown(c, DEFAULT_TEMPLATE), DEFAULT_TEMPLATE) == c.states

    def test_render_parse_render_is_fixed_point(self):
        c = set_item(fresh(), "installation", True, REVIEWER, clock=CLOCK)
        rendered = render_markdown(c, DEFAULT_TEMPLATE)
        states = parse_markdown(rendered, DEFAULT_TEMPLATE)
        again = ReviewerChecklist(REVIEWER, "S1", states=states)
        assert render_markdown(again, DEFAULT_TEMPLATE) == rendered

    def test_expected_item_lines(self):
        rendered = render_markdown(fresh(), DEFAULT_TEMPLATE)
        assert (
            "- [ ] **Installation**: Does installation proceed as outlined in the"
            " documentation?" in rendered
        )
        c = set_item(fresh(), "license", True, REVIEWER, clock=CLOCK)
        assert (
            "- [x] **License**: Does the repository contain a plain-text LICENSE file"
            " with the contents of an OSI-approved software license?"
            in render_markdown(c, DEFAULT_TEMPLATE)
        )

    @pytest.mark.parametrize("line_position", range(18))
    def test_single_line_toggle_flips_exactly_one_item(self, line_position):
        rendered = render_markdown(fresh(), DEFAULT_TEMPLATE)
        lines = rendered.split("\n")
        item_lines = [i for i, line in enumerate(lines) if line.startswith("- [ ] ")]
        target = item_lines[line_position]
        lines[target] = lines[target].replace("- [ ] ", "- [x] ", 1)
        states = parse_markdown("\n".join(lines), DEFAULT_TEMPLATE)
        assert sum(states.values()) == 1
        assert states[DEFAULT_TEMPLATE.item_ids()[line_position]]

    def test_deleted_line_raises_missing_item(self):
        rendered = render_markdown(fresh(), DEFAULT_TEMPLATE)
        lines = [line for line in rendered.split("\n") if "**License**" not in line]
        with pytest.raises(MissingItem):
            parse_markdown("\n".join(lines), DEFAULT_TEMPLATE)

    def test_unrecognized_lines_ignored(self):
        rendered = render_markdown(fresh(), DEFAULT_TEMPLATE)
        noisy = "Hello!\n" + rendered + "\n\nSome closing discussion.\n- [ ] not an item\n"
        assert parse_markdown(noisy, DEFAULT_TEMPLATE) == fresh().states

    def test_duplicate_labels_disambiguated_by_category(self):
        c = set_item(fresh(), "paper-statement-of-need", True, REVIEWER, clock=CLOCK)
        states = parse_markdown(render_markdown(c, DEFAULT_TEMPLATE), DEFAULT_TEMPLATE)
        assert states["paper-statement-of-need"]
        assert not states["statement-of-need"]


class TestFastTrack:
    def test_exact_sentence_detected(self):
        note = (
            "This submission has been accepted to rOpenSci. The review thread can be"
            " found at https://github.com/ropensci/software-review/issues/1"
        )
        assert detect_fast_track(note)

    def test_lowercase_variant_not_detected(self):
        assert not detect_fast_track("this submission has been accepted to ropensci.")

    def test_empty_note(self):
        assert not detect_fast_track("")
