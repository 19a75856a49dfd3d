"""Literal fixtures transcribed from published examples, plus constructed cases."""

from chapterforge.model import ChapterSet, Modality, TimedUtterance, VideoDocument

# Four interleaved records of the example transcript (video length 00:09:52).
EXAMPLE_DURATION = 592
EXAMPLE_ASR = [
    {"start": 0.0, "end": 3.2, "text": "This place has blown our minds."},
    {"start": 4.9, "end": 5.0, "text": "Look at this."},
    {"start": 5.0, "end": 8.4, "text": "In this episode, we're exploring Buckhorn Wash, Utah."},
]
EXAMPLE_CAPTIONS = [
    {
        "time": 1,
        "text": (
            "The image features two individuals, a man and a woman, standing outdoors in a "
            "natural setting with rocky terrain and sparse vegetation in the background."
        ),
    }
]
EXAMPLE_LISTING = (
    "ASR 00:00:00: This place has blown our minds.\n"
    "Caption 00:00:01: The image features two individuals, a man and a woman, standing "
    "outdoors in a natural setting with rocky terrain and sparse vegetation in the background.\n"
    "ASR 00:00:04: Look at this.\n"
    "ASR 00:00:05: In this episode, we're exploring Buckhorn Wash, Utah.\n"
)
EXAMPLE_SPEECH_LISTING = (
    "00:00:00: This place has blown our minds.\n"
    "00:00:04: Look at this.\n"
    "00:00:05: In this episode, we're exploring Buckhorn Wash, Utah.\n"
)


def example_document() -> VideoDocument:
    utts = [
        TimedUtterance(Modality.SPEECH, int(r["start"]), r["text"], end=int(r["end"]))
        for r in EXAMPLE_ASR
    ]
    utts += [TimedUtterance(Modality.CAPTION, r["time"], r["text"]) for r in EXAMPLE_CAPTIONS]
    return VideoDocument.build("buckhorn", EXAMPLE_DURATION, utts)


# Ground-truth chapter listing of the same video, unwrapped.
CHAPTER_LISTING = (
    "00:00:00 - We're at Buckhorn Wash, Utah\n"
    "00:00:51 - Morrison Knudson (MK) Tunnels\n"
    "00:01:25 - In Buckhorn Wash, Like a Little Zion\n"
    "00:02:15 - Buckhorn Wash Pictograph Panel\n"
    "00:03:25 - Camping in the Wash, Driving Through the Canyon\n"
    "00:04:47 - Swinging Bridge Campground & San Rafael Bridge\n"
    "00:06:08 - Buckhorn Draw Visitor Center, Well, & Spanish Trail\n"
    "00:08:37 - Boondocking at Utah Lake\n"
    "00:08:57 - Scenes from the Next Episode - Nevada: Lemoille Canyon\n"
    "00:09:14 - Bloopers\n"
)
CHAPTER_STARTS = [0, 51, 85, 135, 205, 287, 368, 517, 537, 554]

# The same listing hard-wrapped the way it is typeset.
CHAPTER_LISTING_WRAPPED = """\
 00:00:00 - We're at Buckhorn Wash, 
   Utah
 00:00:51 - Morrison Knudson (MK) 
   Tunnels
 00:01:25 - In Buckhorn Wash, Like a 
   Little Zion
 00:02:15 - Buckhorn Wash Pictograph 
   Panel
 00:03:25 - Camping in the Wash, 
   Driving Through the Canyon
 00:04:47 - Swinging Bridge Campground 
   & San Rafael Bridge
 00:06:08 - Buckhorn Draw Visitor 
   Center, Well, & Spanish Trail
 00:08:37 - Boondocking at Utah Lake
 00:08:57 - Scenes from the Next 
   Episode - Nevada: Lemoille Canyon
 00:09:14 - Bloopers
"""

# Segmentation-metric worked examples. Only the matched IoUs are published;
# these integer-second chapter sets were found by exhaustive search to
# reproduce them under greedy matching.
TOP_PUBLISHED_IOUS = (97.6, 53.6, 89.3, 98.3)
TOP_PUBLISHED_TIOU = 84.7
TOP_DURATION = 306
TOP_GT_STARTS = (0, 41, 108, 166, 191)
TOP_PRED_STARTS = (0, 40, 165, 193)

BOTTOM_PUBLISHED_IOUS = (60.7, 47.14, 40.3)
BOTTOM_PUBLISHED_TIOU = 49.4
BOTTOM_DURATION = 185
BOTTOM_GT_STARTS = (0, 27, 124)
BOTTOM_PRED_STARTS = (0, 67, 148)


def chapters(starts, duration, prefix="c") -> ChapterSet:
    return ChapterSet.from_pairs([(s, f"{prefix}{i}") for i, s in enumerate(starts)], duration)


def top_case() -> tuple[ChapterSet, ChapterSet]:
    return chapters(TOP_PRED_STARTS, TOP_DURATION, "p"), chapters(TOP_GT_STARTS, TOP_DURATION, "g")


def bottom_case() -> tuple[ChapterSet, ChapterSet]:
    return (
        chapters(BOTTOM_PRED_STARTS, BOTTOM_DURATION, "p"),
        chapters(BOTTOM_GT_STARTS, BOTTOM_DURATION, "g"),
    )
