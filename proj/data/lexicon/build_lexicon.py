#!/usr/bin/env python3
"""Regenerates anvil.tsv, the starter lexicon for caption-style English.

Run from anywhere: python3 data/lexicon/build_lexicon.py
"""

from pathlib import Path

DETERMINERS = """a an the this that these those some any each every no another both
either neither several many few all its his her their our my your""".split()

PREPOSITIONS = """with on in at under over above below beside behind near by for of from
into onto inside outside within without across against along among around
between beyond through towards toward upon beneath underneath next via
during after before like about off out up down past""".split()

CONJUNCTIONS = ["and", "or", "but", "nor", "plus"]
RELPRONS = ["which", "who", "that", "whose"]
COPULAS = {"is": "be", "are": "be", "was": "be", "were": "be", "be": "be", "being": "be",
           "been": "be", "seems": "seem", "seem": "seem", "looks": "look"}

ADVERBS = """not very quite rather slightly partly partially too fairly almost nearly
highly brightly heavily lightly newly freshly recently badly well brightly
softly sharply deeply darkly richly neatly loosely tightly roughly carefully
densely sparsely extremely really mostly fully half never also just still
upside often somewhat barely""".split()

NUMBERS = """one two three four five six seven eight nine ten eleven twelve twenty
thirty forty fifty hundred thousand dozen first second third fourth fifth""".split()

ADJECTIVES = """black white red green blue yellow orange purple pink brown grey gray golden beige
cream dark light pale bright dull shiny matt glossy transparent translucent opaque
clear colourful colorful multicoloured striped spotted checked patterned plain old
new young ancient modern antique vintage old-fashioned old-style contemporary
traditional classic retro large big small little tiny huge giant enormous massive
long short tall high low wide narrow thick thin deep shallow heavy light round
square rectangular oval circular triangular flat curved straight bent twisted
pointed sharp blunt smooth rough soft hard wet dry hot cold warm cool frozen fresh
ripe rotten raw cooked empty full open closed broken damaged cracked torn worn clean
dirty dusty rusty wooden metallic woollen woolen ceramic rubber electric electronic
digital analogue manual automatic portable mobile wireless cordless industrial
domestic medical military naval commercial professional amateur public private local
national international royal urban rural rocky sandy snowy grassy muddy icy sunny
cloudy foggy misty rainy stormy windy calm quiet busy crowded deserted lonely
abandoned ruined derelict famous beautiful pretty ugly elegant simple complex ornate
decorative fancy formal casual smart scruffy tidy messy happy sad angry smiling
laughing serious elderly middle-aged teenage adult male female human wild tame
domestic natural artificial organic ridged ribbed grooved padded folded rolled
stacked tilted sepia monochrome on-board onboard overhead underwater outdoor indoor
upper lower inner outer rear left right central main whole single double triple
various different similar same other own several typical strange unusual rare common
special ordinary extra spare blank vacant distant nearby remote foreign exotic
tropical arctic northern southern eastern western american british english french
german italian japanese chinese russian spanish indian african european asian
victorian georgian edwardian medieval roman greek gothic baroque industrial rural
coastal alpine floral geometric abstract scenic panoramic aerial close-up
black-and-white hand-made handmade home-made homemade ready-made free-standing
high-speed low-level hi-fi so-called fake real genuine official secret hidden
visible invisible loud noisy silent fast slow quick rapid steep gentle rough-hewn
slim fat lean muscular bald blond blonde curly hairy furry feathered scaly slimy
sticky greasy oily salty sweet sour bitter spicy tasty delicious fragile sturdy
solid hollow dense loose tight bare naked covered dressed clothed uniformed armed
masked bearded veiled crowned winged horned legged wheeled""".split()

NOUNS = """camera lens tripod flash film photograph photo picture image print slide
negative album frame portrait snapshot studio darkroom shutter viewfinder filter
surface table desk chair stool bench sofa couch bed shelf cupboard cabinet drawer
wardrobe mirror lamp light bulb candle clock watch calendar book magazine newspaper
paper page letter envelope card map poster sign label ticket note notebook diary
pen pencil brush paint canvas easel ruler scissors knife fork spoon plate bowl cup
mug glass bottle jar jug pot pan kettle teapot tray basket box bag case suitcase
briefcase handbag wallet purse flask hip flask umbrella hat cap helmet scarf glove
shoe boot sock coat jacket shirt dress skirt trousers jeans suit uniform tie belt
button ring necklace bracelet earring jewel jewellery diamond pearl crown sword
gun rifle pistol shield armour flag banner statue sculpture monument fountain
bridge tower castle palace church cathedral temple mosque house home cottage
building skyscraper office factory warehouse shop store market street road
avenue lane path track railway station platform airport harbour port dock pier
quay beach coast shore sea ocean lake river stream waterfall pond pool canal
island mountain hill valley cliff rock stone boulder cave desert forest wood
woodland jungle field meadow farm garden park lawn hedge fence gate wall roof
door window floor ceiling room kitchen bathroom bedroom hall corridor staircase
stair step ladder balcony terrace garage barn shed tent hut cabin car vehicle
van truck lorry bus coach taxi tram train engine locomotive carriage wagon
bicycle bike motorcycle motorbike scooter boat ship yacht ferry canoe raft
submarine aircraft aeroplane airplane plane jet helicopter rocket spacecraft
craft space satellite shuttle astronaut pilot driver passenger sailor soldier
officer policeman fireman doctor nurse teacher student child boy girl baby man
woman person people family crowd group team audience player athlete runner
swimmer dancer singer musician artist painter photographer model worker farmer
fisherman king queen prince princess president minister bishop priest monk nun
horse pony donkey cow bull calf sheep lamb goat pig dog puppy cat kitten rabbit
mouse rat bird duck goose swan chicken hen eagle owl parrot pigeon fish shark
whale dolphin seal snake lizard frog turtle insect butterfly bee spider elephant
lion tiger bear wolf fox deer monkey giraffe zebra camel kangaroo tree bush
plant flower rose tulip daisy leaf branch trunk root grass weed fruit apple
orange banana lemon grape cherry strawberry vegetable potato tomato carrot onion
bread cake biscuit cheese egg meat sandwich pizza soup salad food meal breakfast
lunch dinner drink wine beer coffee tea milk water juice sky sun moon star cloud
rain snow ice fog mist storm wind sunset sunrise shadow reflection smoke fire
flame computer keyboard monitor screen laptop telephone phone television radio
speaker microphone headphone cable wire plug socket switch battery machine
copier printer scanner photocopier fax calculator projector document file folder
report chart graph diagram drawing sketch painting mural tapestry carpet rug
curtain blind cushion pillow blanket towel sheet tablecloth napkin vase ornament
toy doll ball game puzzle kite balloon instrument guitar piano violin drum trumpet
flute tool hammer saw drill spanner wrench screwdriver nail screw bolt nut
rope chain hook wheel tyre tire handle lever button knob dial gauge meter pipe
tube hose tap sink bath shower toilet basin bucket spade shovel rake fork
wheelbarrow tractor crane digger bulldozer container barrel crate sack parcel
package gift present colour color shape pattern texture background foreground
edge corner centre center side top bottom front back end middle part piece
section area zone region country city town village capital county land world
earth ground soil sand mud dust dirt metal wood plastic leather fabric cloth
cotton wool silk lace velvet denim paper cardboard glass steel iron gold silver
copper brass bronze marble granite concrete brick tile slate timber plank board
panel sheet strip bar rod pole post stick stake column pillar arch dome spire
chimney stack heap pile row line set pair collection series display exhibition
museum gallery library school university hospital hotel restaurant cafe pub bar
theatre cinema stadium arena court pitch zoo circus fair festival parade
ceremony wedding party concert match race crowd queue view scene landscape
seascape cityscape skyline panorama close-up closeup detail angle zoom focus
exposure sepia contrast tone light lighting spotlight floodlight lantern torch
magnifier glass telescope microscope binoculars spectacles sunglasses
goggles mask wig beard moustache hair face head eye nose mouth ear hand arm
leg foot finger knee shoulder back body skin smile expression magazine fashion
model catwalk style design logo brand advert advertisement billboard""".split()

VERBS = """show hold carry wear sit stand lie lean rest hang float fly drive ride
walk run jump swim climb dance play sing read write paint draw cook eat drink
smile laugh look watch point reach open close fill cover wrap surround face
protrude magnify reflect shine glow burn melt pour spill stack fold roll bend
twist break crack tear cut slice chop build make decorate paint print photograph
frame mount display exhibit light illuminate shade colour color stripe spot
mark label sign tie knot chain lock park moor anchor dock land launch orbit
approach leave arrive enter cross pass overlook border line crowd gather queue
wait work repair clean wash dry polish fix attach connect join separate divide
fence wall pave tile plant grow bloom flower ripen pick harvest feed graze
hunt fish sail row paddle push pull lift drop throw catch kick hit strike
hug kiss greet wave shake nod kneel crouch bow pose model sleep wake rise set
surround gleam sparkle glitter float drift flow fall tower loom stretch spread
scatter pile heap tip lean tilt balance support protect guard block hide
reveal contain hold store pack seal stamp post deliver send receive use operate
control steer navigate zoom focus capture film record shoot""".split()

# Nouns with irregular plurals and verbs with irregular forms.
IRREGULAR_PLURALS = {
    "man": "men", "woman": "women", "child": "children", "person": "people",
    "foot": "feet", "tooth": "teeth", "mouse": "mice", "goose": "geese",
    "knife": "knives", "leaf": "leaves", "shelf": "shelves", "wolf": "wolves",
    "loaf": "loaves", "calf": "calves", "half": "halves", "sheep": "sheep",
    "deer": "deer", "fish": "fish", "aircraft": "aircraft", "spacecraft": "spacecraft",
    "craft": "craft", "policeman": "policemen", "fireman": "firemen",
    "fisherman": "fishermen", "cactus": "cacti", "scissors": "scissors",
    "binoculars": "binoculars", "spectacles": "spectacles", "trousers": "trousers",
    "jeans": "jeans", "sunglasses": "sunglasses", "goggles": "goggles",
    "jewellery": "jewellery", "people": "people",
}
IRREGULAR_VERBS = {
    # lemma: (third person, past, past participle, present participle)
    "hold": ("holds", "held", "held", "holding"),
    "wear": ("wears", "wore", "worn", "wearing"),
    "sit": ("sits", "sat", "sat", "sitting"),
    "stand": ("stands", "stood", "stood", "standing"),
    "lie": ("lies", "lay", "lain", "lying"),
    "hang": ("hangs", "hung", "hung", "hanging"),
    "fly": ("flies", "flew", "flown", "flying"),
    "drive": ("drives", "drove", "driven", "driving"),
    "ride": ("rides", "rode", "ridden", "riding"),
    "run": ("runs", "ran", "run", "running"),
    "swim": ("swims", "swam", "swum", "swimming"),
    "sing": ("sings", "sang", "sung", "singing"),
    "read": ("reads", "read", "read", "reading"),
    "write": ("writes", "wrote", "written", "writing"),
    "draw": ("draws", "drew", "drawn", "drawing"),
    "eat": ("eats", "ate", "eaten", "eating"),
    "drink": ("drinks", "drank", "drunk", "drinking"),
    "shine": ("shines", "shone", "shone", "shining"),
    "burn": ("burns", "burnt", "burnt", "burning"),
    "spill": ("spills", "spilt", "spilt", "spilling"),
    "break": ("breaks", "broke", "broken", "breaking"),
    "tear": ("tears", "tore", "torn", "tearing"),
    "cut": ("cuts", "cut", "cut", "cutting"),
    "build": ("builds", "built", "built", "building"),
    "make": ("makes", "made", "made", "making"),
    "light": ("lights", "lit", "lit", "lighting"),
    "leave": ("leaves", "left", "left", "leaving"),
    "grow": ("grows", "grew", "grown", "growing"),
    "throw": ("throws", "threw", "thrown", "throwing"),
    "catch": ("catches", "caught", "caught", "catching"),
    "hit": ("hits", "hit", "hit", "hitting"),
    "strike": ("strikes", "struck", "struck", "striking"),
    "shake": ("shakes", "shook", "shaken", "shaking"),
    "kneel": ("kneels", "knelt", "knelt", "kneeling"),
    "sleep": ("sleeps", "slept", "slept", "sleeping"),
    "wake": ("wakes", "woke", "woken", "waking"),
    "rise": ("rises", "rose", "risen", "rising"),
    "set": ("sets", "set", "set", "setting"),
    "fall": ("falls", "fell", "fallen", "falling"),
    "spread": ("spreads", "spread", "spread", "spreading"),
    "hide": ("hides", "hid", "hidden", "hiding"),
    "send": ("sends", "sent", "sent", "sending"),
    "shoot": ("shoots", "shot", "shot", "shooting"),
    "lean": ("leans", "leant", "leant", "leaning"),
    "show": ("shows", "showed", "shown", "showing"),
}

# Surface forms whose tag must not be overridden by a generated form.
FIXED = {"left": ("left", "adj"), "light": ("light", "adj"), "set": ("set", "noun"),
         "spread": ("spread", "noun"), "cut": ("cut", "noun"), "read": ("read", "verb"),
         "lit": ("lit", "adj"), "shot": ("shot", "noun"), "run": ("run", "noun"),
         "built": ("build", "verb"), "made": ("make", "verb"), "worn": ("worn", "adj"),
         "broken": ("broken", "adj"), "torn": ("torn", "adj"), "frozen": ("frozen", "adj"),
         "hidden": ("hidden", "adj"), "drunk": ("drunk", "adj"), "fallen": ("fallen", "adj")}


def plural(noun: str) -> str:
    if noun in IRREGULAR_PLURALS:
        return IRREGULAR_PLURALS[noun]
    if noun.endswith(("s", "x", "z", "ch", "sh")):
        return noun + "es"
    if noun.endswith("y") and noun[-2:-1] not in "aeiou":
        return noun[:-1] + "ies"
    return noun + "s"


def verb_forms(verb: str) -> tuple[str, str, str, str]:
    if verb in IRREGULAR_VERBS:
        return IRREGULAR_VERBS[verb]
    consonant_end = (len(verb) >= 3 and verb[-1] not in "aeiouwxy" and verb[-2] in "aeiou"
                     and verb[-3] not in "aeiou" and len(verb) <= 4)
    if verb.endswith("e"):
        stem_ed, stem_ing = verb[:-1], verb[:-1]
    elif verb.endswith("y") and verb[-2] not in "aeiou":
        stem_ed, stem_ing = verb[:-1] + "i", verb
    elif consonant_end:
        stem_ed = stem_ing = verb + verb[-1]
    else:
        stem_ed = stem_ing = verb
    third = plural(verb) if not verb.endswith("y") or verb[-2] in "aeiou" else verb[:-1] + "ies"
    past = stem_ed + "ed"
    return third, past, past, stem_ing + "ing"


def main() -> None:
    entries: dict[str, tuple[str, str]] = {}

    def add(surface: str, lemma: str, pos: str) -> None:
        entries.setdefault(surface, (lemma, pos))

    for surface, (lemma, pos) in FIXED.items():
        add(surface, lemma, pos)
    for w in DETERMINERS:
        add(w, w, "det")
    for w in PREPOSITIONS:
        add(w, w, "prep")
    for w in CONJUNCTIONS:
        add(w, w, "conj")
    for w in RELPRONS:
        add(w, w, "relpron")
    for surface, lemma in COPULAS.items():
        add(surface, lemma, "cop")
    for w in ADVERBS:
        add(w, w, "adv")
    for w in NUMBERS:
        add(w, w, "num")
    for w in ADJECTIVES:
        add(w, w, "adj")
    for w in NOUNS:
        add(w, w, "noun")
        add(plural(w), w, "noun")
    for w in VERBS:
        # Base and third-person forms are usually nouns in captions, so only
        # the participles are entered as verbs.
        _, past, participle, ing = verb_forms(w)
        for form in (past, participle, ing):
            add(form, w, "verb")

    out = Path(__file__).with_name("anvil.tsv")
    lines = ["# surface\tlemma\tpos  (generated by build_lexicon.py)"]
    lines += [f"{s}\t{l}\t{p}" for s, (l, p) in sorted(entries.items())]
    out.write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"{len(entries)} entries -> {out}")


if __name__ == "__main__":
    main()
