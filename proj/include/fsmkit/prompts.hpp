#pragma once

// The fixed prompt texts. These are wire-format contracts: the repair
// fragment headers below are also what the cooperative simulator scans for,
// so they must stay byte-identical between the writers (repair drivers) and
// the reader (simulator).

namespace fsmkit::prompts {

inline constexpr const char* kGenerationSystemRole =
    "You are a professional software engineer working on a project to generate a CSV representation of a finite "
    "state machine (FSM) from a natural language description. You have been given the following description:";

inline constexpr const char* kGenerationUserPattern =
    "{description} Can you create the previous automaton on csv format with the following order: State, Input, "
    "Output, Next_State, the states should be named Si (where i is always a number), the first row should contain "
    "State, Input, Output, Next_State, and the other rows should only contain the state name in Si format (where i "
    "is always a number) the input the output and the next state name in Si format (where i is always a number), "
    "there shouldnt spaces between each information only comas., here is an example: first row: State, Input, "
    "Output, Next_State, second row: S0,a,0,S2 third row: S1,b,1,S3 fourth row: S2,c,0,S1 fifth row: S3,d,1,S0. "
    "Please do not add any comments to the csv file. Please keep in mind the machine should be complete and "
    "deterministic.";

inline constexpr const char* kSyntacticPresentHeader =
    "Correct the automaton so that these transitions are present in the generated automaton:\n";

// No trailing newline here; the source template omits it.
inline constexpr const char* kSyntacticAbsentHeader =
    "Correct the automaton so that these transitions are not present in the generated automaton:";

inline constexpr const char* kSyntacticKeepHeader =
    "These transitions are correct and should be present in the generated automaton:\n";

inline constexpr const char* kSyntacticFormatReminder =
    "Please keep this format: State, Input, Output, Next_State, the states should be named Si (where i is always a "
    "number), the first row should contain State, Input, Output, Next_State, and the other rows should only contain "
    "the state name in Si format (where i is always a number) the input the output and the next state name in Si "
    "format (where i is always a number), there shouldnt spaces between each information only comas., here is an "
    "example: first row: State, Input, Output, Next_State, second row: S0,a,0,S2 third row: S1,b,1,S3 fourth row: "
    "S2,c,0,S1 fifth row: S3,d,1,S0. Do not add any comments\n";

inline constexpr const char* kTraceInputHeader =
    "Correct the automaton so that this input sequence given to the automaton:\n";

inline constexpr const char* kTraceOutputHeader = "Generates this output sequence:\n";

// Same reminder as above except the missing space after the final period.
inline constexpr const char* kTraceFormatReminder =
    "Please keep this format: State, Input, Output, Next_State, the states should be named Si (where i is always a "
    "number), the first row should contain State, Input, Output, Next_State, and the other rows should only contain "
    "the state name in Si format (where i is always a number) the input the output and the next state name in Si "
    "format (where i is always a number), there shouldnt spaces between each information only comas., here is an "
    "example: first row: State, Input, Output, Next_State, second row: S0,a,0,S2 third row: S1,b,1,S3 fourth row: "
    "S2,c,0,S1 fifth row: S3,d,1,S0.Do not add any comments\n";

}  // namespace fsmkit::prompts
