#pragma once

// Worked examples shared by the unit and acceptance suites. The two
// "decipher" fixtures pair a question with a degraded two-part
// decomposition of it (clue = the gold structure carrying the degraded
// surface text, which loses and garbles words).

namespace qdt::fixtures {

// Nested example: one conjunction plus one inner question of two
// descriptions (depth 2, four description nodes).
inline constexpr const char* kMarlinsQuestion =
    "What home of the Florida Marlins is also the birthplace of a notable "
    "professional athlete who began their career in 1997";
inline constexpr const char* kMarlinsQdt =
    "What home of the Florida Marlins [DES] is also the birthplace of [INQL] "
    "a notable professional athlete [DES] who began their career in 1997 "
    "[INQR]";

// Conjunction-only example; the degraded clue drops "Taylor" and the
// trailing id and lowercases the head.
inline constexpr const char* kFilmsQuestion =
    "What films featuring Taylor Swift have netflix_id numbers above 70068848";
inline constexpr const char* kFilmsQdt =
    "What films [DES] featuring Taylor Swift [DES] have netflix_id numbers "
    "above 70068848";
inline constexpr const char* kFilmsClue =
    "what films [DES] featuring swift [DES] have netflix_id numbers above";
inline constexpr const char* kFilmsSubQ1 = "what films featuring swift";
inline constexpr const char* kFilmsSubQ2 = "have netflix_id numbers above";

// Composition example; the degraded clue scrambles the quoted title.
inline constexpr const char* kSchoolsQuestion =
    "What schools were attended by the characted of focus in the film "
    "`` William & Kate ''";
inline constexpr const char* kSchoolsQdt =
    "What schools [DES] were attended by [INQL] the characted of focus in "
    "the film `` William & Kate '' [INQR]";
inline constexpr const char* kSchoolsClue =
    "what schools [DES] were attended by [INQL] the characted of "
    "`` characted focus & the film '' [INQR]";
inline constexpr const char* kSchoolsSubQ1 = "what schools were attended by [INQ]";

}  // namespace qdt::fixtures
