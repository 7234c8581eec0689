#include "streetlab/behavior/library.hpp"

#include "streetlab/rdf/trig.hpp"

namespace streetlab::behavior {

std::string_view builtin_behaviors_trig() {
  static constexpr std::string_view kText = R"(@prefix bt: <https://streetlab.dev/bt#> .
@prefix cross: <https://streetlab.dev/behaviors/crossing#> .
@prefix drive: <https://streetlab.dev/behaviors/drive#> .

<https://streetlab.dev/behaviors> {
  <https://streetlab.dev/behaviors/crossing> a bt:Sequence ;
    bt:label "cross the road" ;
    bt:child [ bt:index 0 ; bt:node cross:walk-to-curb ] ,
             [ bt:index 1 ; bt:node cross:shoulder-check ] ,
             [ bt:index 2 ; bt:node cross:decide ] .

  cross:walk-to-curb a bt:Action ;
    bt:label "walk to curb" ;
    bt:action "walk-to-waypoint" ;
    bt:param [ bt:name "waypoint" ; bt:value 0 ] .

  cross:shoulder-check a bt:Action ;
    bt:label "shoulder check" ;
    bt:action "play-animation" ;
    bt:param [ bt:name "animation" ; bt:value "shoulder-check" ] ,
             [ bt:name "duration" ; bt:value 0.8 ] .

  cross:decide a bt:Fallback ;
    bt:label "decide" ;
    bt:child [ bt:index 0 ; bt:node cross:retreat ] ,
             [ bt:index 1 ; bt:node cross:cross ] .

  cross:retreat a bt:Sequence ;
    bt:label "retreat" ;
    bt:child [ bt:index 0 ; bt:node cross:car-approaching ] ,
             [ bt:index 1 ; bt:node cross:remember-danger ] ,
             [ bt:index 2 ; bt:node cross:abort ] .

  cross:car-approaching a bt:Condition ;
    bt:label "car approaching" ;
    bt:query """ASK {
      ?self perc:closingSpeed ?c ; perc:distance ?d ; perc:safeDistance ?safe .
      FILTER(?c > 0.5)
      FILTER(?d < ?safe)
    }""" .

  cross:remember-danger a bt:Update ;
    bt:label "remember vehicle" ;
    bt:bindingQuery "SELECT ?v { ?self perc:nearestVehicle ?v }" ;
    bt:insert "?self sl:yieldedTo ?v ." .

  cross:abort a bt:Action ;
    bt:label "abort and return" ;
    bt:action "abort-and-return" .

  cross:cross a bt:Action ;
    bt:label "cross" ;
    bt:action "follow-path" .

  <https://streetlab.dev/behaviors/drive> a bt:Sequence ;
    bt:label "drive" ;
    bt:child [ bt:index 0 ; bt:node drive:follow ] ,
             [ bt:index 1 ; bt:node drive:park ] .

  drive:follow a bt:Action ;
    bt:label "follow path" ;
    bt:action "follow-path" .

  drive:park a bt:Action ;
    bt:label "stop" ;
    bt:action "set-speed" ;
    bt:param [ bt:name "speed" ; bt:value 0 ] .

  <https://streetlab.dev/behaviors/stroll> a bt:Action ;
    bt:label "stroll" ;
    bt:action "follow-path" .
}
)";
  return kText;
}

rdf::Dataset builtin_behaviors() {
  rdf::ParseOptions opts;
  opts.blank_prefix = "lib";
  return rdf::parse_trig(builtin_behaviors_trig(), opts);
}

}  // namespace streetlab::behavior
