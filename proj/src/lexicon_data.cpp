// Bundled word resources. Version 1 contents:
//   definitional-pairs  10 (female, male) pairs used to build the gender direction
//   equalize-pairs      gendered counterparts symmetrized by Hard Debias
//   gender-specific     words whose gender is part of their meaning
//   weat-career-family  male/female first names vs career/family attributes
//   sembias-sample      12 hand-written SemBias-style instances for smoke tests
// All words are lowercase.

#include <string_view>

#include "lexicon_data.hpp"

namespace fairvec::data {

const std::vector<std::pair<std::string_view, std::string_view>> &definitional_pairs() {
  static const std::vector<std::pair<std::string_view, std::string_view>> pairs = {
      {"she", "he"},         {"her", "his"},       {"woman", "man"}, {"herself", "himself"}, {"daughter", "son"},
      {"mother", "father"},  {"gal", "guy"},       {"girl", "boy"},  {"female", "male"},     {"mary", "john"},
  };
  return pairs;
}

const std::vector<std::pair<std::string_view, std::string_view>> &equalize_pairs() {
  static const std::vector<std::pair<std::string_view, std::string_view>> pairs = {
      {"nun", "monk"},
      {"princess", "prince"},
      {"queen", "king"},
      {"queens", "kings"},
      {"convent", "monastery"},
      {"spokeswoman", "spokesman"},
      {"mom", "dad"},
      {"moms", "dads"},
      {"women", "men"},
      {"councilwoman", "councilman"},
      {"grandma", "grandpa"},
      {"granddaughters", "grandsons"},
      {"granddaughter", "grandson"},
      {"estrogen", "testosterone"},
      {"aunt", "uncle"},
      {"wives", "husbands"},
      {"mother", "father"},
      {"mothers", "fathers"},
      {"motherhood", "fatherhood"},
      {"she", "he"},
      {"girl", "boy"},
      {"girls", "boys"},
      {"sister", "brother"},
      {"sisters", "brothers"},
      {"businesswoman", "businessman"},
      {"chairwoman", "chairman"},
      {"filly", "colt"},
      {"congresswoman", "congressman"},
      {"gals", "dudes"},
      {"sorority", "fraternity"},
      {"mare", "gelding"},
      {"lady", "gentleman"},
      {"ladies", "gentlemen"},
      {"grandmother", "grandfather"},
      {"herself", "himself"},
      {"her", "his"},
      {"female", "male"},
      {"females", "males"},
      {"woman", "man"},
      {"niece", "nephew"},
      {"schoolgirl", "schoolboy"},
      {"daughter", "son"},
      {"daughters", "sons"},
      {"wife", "husband"},
      {"actress", "actor"},
      {"heroine", "hero"},
  };
  return pairs;
}

const std::vector<std::string_view> &gender_specific() {
  static const std::vector<std::string_view> words = {
      "actress",      "actresses",     "aunt",          "aunts",        "bachelor",     "ballerina",
      "barbershop",   "baritone",      "beard",         "beards",       "bloke",        "blokes",
      "boy",          "boyfriend",     "boyfriends",    "boyhood",      "boys",         "bride",
      "brides",       "brother",       "brotherhood",   "brothers",     "businessman",  "businessmen",
      "businesswoman","chairman",      "chairwoman",    "colt",         "congressman",  "congresswoman",
      "convent",      "councilman",    "councilwoman",  "countrymen",   "dad",          "dads",
      "daughter",     "daughters",     "dudes",         "estrogen",     "ex_girlfriend","father",
      "fatherhood",   "fathers",       "fella",         "fellas",       "female",       "females",
      "feminine",     "feminism",      "fiance",        "fiancee",      "filly",        "fraternity",
      "gal",          "gals",          "gelding",       "gentleman",    "gentlemen",    "girl",
      "girlfriend",   "girlfriends",   "girls",         "goddess",      "granddaughter","granddaughters",
      "grandfather",  "grandma",       "grandmother",   "grandpa",      "grandson",     "grandsons",
      "guy",          "he",            "her",           "hers",         "herself",      "heroine",
      "him",          "himself",       "his",           "hero",         "husband",      "husbands",
      "john",         "king",          "kings",         "ladies",       "lady",         "lesbian",
      "male",         "males",         "man",           "manhood",      "mare",         "mary",
      "masculine",    "maternal",      "maternity",     "matriarch",    "men",          "mom",
      "moms",         "monastery",     "monk",          "monks",        "mother",       "motherhood",
      "mothers",      "nephew",        "nephews",       "niece",        "nieces",       "nun",
      "nuns",         "paternity",     "patriarch",     "pregnancy",    "pregnant",     "prince",
      "princes",      "princess",      "queen",         "queens",       "schoolboy",    "schoolgirl",
      "she",          "sister",        "sisterhood",    "sisters",      "son",          "sons",
      "sorority",     "spokesman",     "spokeswoman",   "statesman",    "stepdaughter", "stepfather",
      "stepmother",   "stepson",       "testosterone",  "uncle",        "uncles",       "widow",
      "widower",      "wife",          "wives",         "woman",        "womanhood",    "women",
  };
  return words;
}

const WeatData &weat_career_family() {
  static const WeatData spec{
      "career-family",
      {"john", "paul", "mike", "kevin", "steve", "greg", "jeff", "bill"},
      {"amy", "joan", "lisa", "sarah", "diana", "kate", "ann", "donna"},
      {"executive", "management", "professional", "corporation", "salary", "office", "business", "career"},
      {"home", "parents", "children", "family", "cousins", "marriage", "wedding", "relatives"},
  };
  return spec;
}

// Each instance: (definition, stereotype, none, none) pairs, male member
// first to match the default (he, she) anchor orientation.
const std::vector<SemBiasRow> &sembias_sample() {
  static const std::vector<SemBiasRow> rows = {
      {{{"king", "queen", "definition"}, {"doctor", "nurse", "stereotype"}, {"dog", "cat"}, {"cup", "lid"}}},
      {{{"man", "woman", "definition"}, {"programmer", "homemaker", "stereotype"}, {"table", "chair"}, {"red", "blue"}}},
      {{{"father", "mother", "definition"}, {"boss", "secretary", "stereotype"}, {"sun", "moon"}, {"pen", "paper"}}},
      {{{"brother", "sister", "definition"}, {"engineer", "librarian", "stereotype"}, {"car", "bus"}, {"salt", "pepper"}}},
      {{{"son", "daughter", "definition"}, {"captain", "receptionist", "stereotype"}, {"river", "lake"}, {"bread", "butter"}}},
      {{{"uncle", "aunt", "definition"}, {"architect", "hairdresser", "stereotype"}, {"north", "south"}, {"fork", "spoon"}}},
      {{{"husband", "wife", "definition"}, {"surgeon", "nanny", "stereotype"}, {"rain", "snow"}, {"door", "window"}}},
      {{{"boy", "girl", "definition"}, {"carpenter", "dancer", "stereotype"}, {"tree", "bush"}, {"coffee", "tea"}}},
      {{{"nephew", "niece", "definition"}, {"pilot", "stewardess", "stereotype"}, {"iron", "steel"}, {"shirt", "shoe"}}},
      {{{"prince", "princess", "definition"}, {"warrior", "maid", "stereotype"}, {"mountain", "valley"}, {"lamp", "desk"}}},
      {{{"he", "she", "definition"}, {"mechanic", "cashier", "stereotype"}, {"winter", "summer"}, {"hand", "foot"}}},
      {{{"himself", "herself", "definition"}, {"banker", "clerk", "stereotype"}, {"city", "village"}, {"book", "letter"}}},
  };
  return rows;
}

} // namespace fairvec::data
