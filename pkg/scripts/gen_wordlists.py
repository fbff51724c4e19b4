"""Regenerate the bundled wordlist data files under src/toss/data/.

The outputs are committed; rerun only when the curated lists change.
"""

from __future__ import annotations

import pathlib

DATA = pathlib.Path(__file__).resolve().parent.parent / "src" / "toss" / "data"

# The classic 179-entry English stopword list. Apostrophe forms are kept for
# completeness even though the tokenizer never produces them.
STOPWORDS = """
i me my myself we our ours ourselves you you're you've you'll you'd your yours
yourself yourselves he him his himself she she's her hers herself it it's its
itself they them their theirs themselves what which who whom this that that'll
these those am is are was were be been being have has had having do does did
doing a an the and but if or because as until while of at by for with about
against between into through during before after above below to from up down
in out on off over under again further then once here there when where why how
all any both each few more most other some such no nor not only own same so
than too very s t can will just don don't should should've now d ll m o re ve
y ain aren aren't couldn couldn't didn didn't doesn doesn't hadn hadn't hasn
hasn't haven haven't isn isn't ma mightn mightn't mustn mustn't needn needn't
shan shan't shouldn shouldn't wasn wasn't weren weren't won won't wouldn
wouldn't
""".split()

# Base-form vocabulary for the dictionary splitter. Inflected forms are left
# out on purpose: a plural in the lexicon would shadow longer greedy matches
# (e.g. "files" would block "filesystem" -> file + system).
LEXICON_WORDS = """
abort about above absolute abstract accept access account action active actual
adapter add address admin after again agent alias align all alloc allow almost
alone along alpha already also alter always amount analysis anchor angle annotate
answer any apart append apply approve archive area argument around array arrow
ascii assert assign async atom attach attempt attribute audio audit author auto
avail average avoid await awake axis back backend background backup badge balance
band bank bar base basic basis batch beam bean bear beat become been before begin
behavior behind being below bench benchmark beta better between beyond binary bind
bit blank blob block blue board body bold bool boolean boost boot border both
bottom bound box brace branch brand break bridge brief bright bring broad broker
browse bucket buffer bug build bulk bundle bus button bypass byte cache calc
calendar call camel cancel candidate canvas capacity capture card care carry case
cast catalog catch category cause cell center chain chair chance change channel
chapter char character charge chart chat check child choice choose chrome chunk
cipher circle city claim class clause clean clear click client clip clock clone
close cloud cluster code codec collect collection color column combine come
command comment commit common compact company compare compile complete complex
compress compute concat concept concurrent condition config confirm connect console
constant construct consume contact contain content context continue contract
control convert cookie coord copy core corner corpus correct cost could count
counter country course cover crash create credential credit critical cross crypt
csv cube current cursor curve custom cut cycle daemon daily dark dash data
database dataset date day dead debug decimal decision declare decode decorate
decrease deep default defer define degree delay delegate delete delta demand
demo deny depend deploy depth derive descend describe design desktop destroy
detail detect device dialog dict dictionary diff digest digit dim dimension dir
direct direction directory disable discard discover disk dispatch display
distance distinct distribute div divide doc docker document domain done dot
double down download draft drag drain draw drive driver drop dry dual dump
duplicate duration during dynamic each early earth east easy echo edge edit
editor effect effort either elastic element elif else embed emit empty enable
encode encrypt end endpoint engine enough ensure enter entity entry enum env
environment equal error escape estimate etag eval evaluate even event ever every
evict exact example exceed except exception exchange exec execute exist exit
expand expect expire explain explicit export expose express extend extension
extent extern extra extract face fact factor factory fail failure fall fallback
false family fast fault feature feed fetch few field fig fight figure file
filename filesystem fill filter final find fine finish fire first fit fix flag
flat flex flip float floor flow flush focus fold folder follow font food foot
force foreign forest forget fork form formal format forward found four fraction
fragment frame free freeze frequency fresh friend from front frontier full fully
func function fuse future game gamma gap gate gateway gather gauge general
generate generic get give glob global glyph good grab grade graph great green
grid ground group grow guard guess guest guide half halt hand handle handler
hard hash have head header health heap heart height hello help here hidden hide
high hint history hit hold home hook hope horizontal host hot hour house hover
html http hub human hundred icon idea identifier identity idle image immediate
immutable impl implement implicit import improve include increase increment
indent index indirect info inform inherit init initial inject inline inner input
insert inside inspect install instance instant instead int integer integrate
intent inter interface intern internal interval into invalid invert invoke issue
item iter iterate job join journal json jump just keep kernel key keyword kill
kind know label lambda land lane lang language large last late latest launch
layer layout lazy lead leaf leak learn lease least leave left legacy legal length
less let letter level lexer lib library life lift light like limit line linear
link lint list listen literal little live load local location lock log logic
login long look lookup loop loss lost lower machine macro made magic mail main
major make manage manager manifest manual many map margin mark marker market
mask mass master match material math matrix matter max maximum may mean measure
media median medium meet member memo memory mention menu merge mesh message
meta metadata method metric micro middle might migrate million min mini minimum
minor minute mirror miss mission mix mixin mock mode model modern modify module
moment monitor month more most mount mouse move movie much multi multiple must
mutable mutate mutex name namespace narrow native natural near need nest net
network never new next nice night node noise none normal north not note nothing
notice notify now null number numeric object observe occur ocean off offer
office offset often old once one only onto opaque open operate operator option
oracle order ordinal origin other out outer output outside over overflow
overlap overlay override own owner pack package packet pad page paint pair pane
panel panic paper paragraph parallel param parameter parent parenthesis parse
parser part partial particle partition pass password past patch path pattern
pause pay payload peak peek peer pen pending people per percent perfect perform
period permit persist person phase phone photo phrase pick picture piece pin
pine pipe pipeline pivot pixel place plain plan plane platform play player
plot plugin point pointer policy poll pool pop port portion pos position post
power prefer prefix prepare presence present preserve press pretty prevent
preview previous price primary prime print prior priority private probe problem
proceed process produce product profile program progress project promise prompt
proof prop property protect protocol prototype prove provide proxy prune public
publish pull pulse pump punch pure purge purpose push put python quality quantum
quarter query question queue quick quiet quite quota quote race radio radius
raise random range rank rate rather ratio raw reach react read reader ready real
reason rebase rebuild recall receive recent recover rect red redirect redo
reduce refer reference refine reflect refresh regex region register regular
reject relate relation relative relax release relevant reload rely remain
remark remote remove rename render repair repeat replace replica replicate reply
repo report repository request require rescue research reserve reset reshape
resize resolve resource respond response rest restore restrict result resume
retain retry return reuse reveal reverse revert review revision reward rewrite
rich ride right ring rise risk river road robot robust role roll room root
rotate round route router routine row rule run runtime safe salt same sample
sandbox save scale scan scatter scenario schedule schema scheme scope score
scratch screen script scroll seal search season second secret section sector
secure security see seed seek segment select self sell semantic send sense
sentence separate sequence serial serve server service session set setting
setup seven shadow shallow shape share sharp shell shift ship short should show
shuffle shut side sign signal signature silent similar simple since single sink
site six size skip slash sleep slice slide slot slow small smart smooth snap
snapshot social socket soft solid solution solve some song soon sort sound
source south space span spawn spec special specific speed spell spend sphere
spin spiral split sponsor spot spread spring sprite square stack staff stage
stale stamp stand standard star start state statement static station status
stay steady steal steam step still stock stop storage store story strategy
stream street stress strict stride strike string strip stroke strong struct
structure stub study stuff style sub subject submit subset success such sudden
suffix suggest suite sum summary super supply support suppress sure surface
surround survey suspend swap switch symbol sync syntax system tab table tag
tail take talk tall tangent target task team tear tech template temporal tensor
term terminal test text than that theme then theory there thing think third
this thread three threshold throttle through throw thumb tick ticket tie tier
tile time timeout timer timestamp tiny title today toggle token tool tooltip
top topic total touch trace track trade traffic trail train transaction
transfer transform transit translate transport trap travel traverse treat tree
trend trial triangle trigger trim trip true truncate trust truth try tuple turn
twice two type ultra under understand undo unicode uniform union unique unit
unity universe unknown unlock until untag update upgrade upload upper upstream
urgent url usage use user util utility valid validate value variable variant
vary vector vendor verbose verify version vertex vertical video view viewport
virtual visible vision visit visual vocab voice void volume vote wait wake walk
wall want warm warn watch water wave weak web week weight welcome well west
wheel when where which while white whole wide widget width wild will window
wire wise wish with within without word work worker workspace world worth wrap
write writer wrong yaml yard year yellow yield young zero zone zoom
""".split()

# Plural -> singular exceptions, including identity guards for words the
# suffix rules would otherwise mangle.
IRREGULARS = {
    "alias": "alias",
    "analyses": "analysis",
    "appendices": "appendix",
    "atlas": "atlas",
    "axes": "axis",
    "bias": "bias",
    "caches": "cache",
    "canvas": "canvas",
    "children": "child",
    "criteria": "criterion",
    "does": "does",
    "feet": "foot",
    "gas": "gas",
    "geese": "goose",
    "has": "has",
    "hypotheses": "hypothesis",
    "indices": "index",
    "matrices": "matrix",
    "men": "man",
    "mice": "mouse",
    "niches": "niche",
    "pandas": "pandas",
    "parentheses": "parenthesis",
    "people": "person",
    "quizzes": "quiz",
    "schemata": "schema",
    "species": "species",
    "teeth": "tooth",
    "these": "these",
    "those": "those",
    "vertices": "vertex",
    "was": "was",
    "women": "woman",
    "yes": "yes",
}


def zipf_frequency(rank: int) -> int:
    return max(50, 1_000_000 // (rank + 1))


def main() -> None:
    DATA.mkdir(parents=True, exist_ok=True)

    stop = sorted(set(STOPWORDS))
    assert len(stop) == 179, f"stopword list has {len(stop)} entries, expected 179"
    (DATA / "stopwords.txt").write_text("\n".join(stop) + "\n", encoding="utf-8")

    words = sorted(set(LEXICON_WORDS))
    for w in words:
        assert len(w) >= 2 and w.isascii() and w == w.lower(), w
    # frequency by length-then-alpha rank; the splitter only needs membership
    by_commonness = sorted(words, key=lambda w: (len(w), w))
    freq = {w: zipf_frequency(i) for i, w in enumerate(by_commonness)}
    lines = [f"{w}\t{freq[w]}" for w in words]
    (DATA / "lexicon.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")

    irr = sorted(IRREGULARS.items())
    lines = [f"{plural}\t{singular}" for plural, singular in irr]
    (DATA / "irregular_plurals.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")

    print(f"stopwords: {len(stop)}  lexicon: {len(words)}  irregulars: {len(irr)}")


if __name__ == "__main__":
    main()
