// SPDX-License-Identifier: Apache-2.0
#include "ecoact/prompts.hpp"

namespace ecoact::prompts {

// The agent prompts keep the wording (and spelling) of the ToolBench-style
// AutoGPT prompt they derive from. The lazy variant names the meta-tool
// "tool_register", matching the declared function.
const std::string_view kEcoActSystem =
    "You are AutoGPT, you can use many tools (functions) to do the following task.\n"
    "First I will give you the task description, and your task start.\n"
    "At each step, you need to give your thought to analyze the status now and what to do next, "
    "with a function call to actually excute your step.\n"
    "After the call, you will get the call result, and you are now in a new state. Then you will "
    "analyze your status now, then decide what to do next.. After many (Thought-call) pairs, you "
    "finally perform the task, then you can give your finial answer.\n"
    "Remember: 1.the state change is irreversible, you can't go back to one of the former state, "
    "if you want to restart the task, say \"I give up and restart\".\n"
    "2.All the thought is short, at most in 5 sentence.\n"
    "3.You can do more then one trys, so if your plan is to continusly try some conditions, you "
    "can do one of the conditions per try.\n"
    "Let's Begin!\n"
    "Task description: You should use functions to help handle the real time user querys. But "
    "every function needs to be selected using \"tool_register\" function before use it. "
    "Remember:\n"
    "1.ALWAYS call \"Finish\" function at the end of the task. And the final answer should "
    "contain enough information to show to the user,If you can't handle the task, or you find "
    "that function calls always fail(the function is not valid now), use function "
    "Finish->give_up_and_restart. 2. do not call the function you have not successfully "
    "selected.";

const std::string_view kEagerSystem =
    "You are AutoGPT, you can use many tools (functions) to do the following task.\n"
    "First I will give you the task description, and your task start.\n"
    "At each step, you need to give your thought to analyze the status now and what to do next, "
    "with a function call to actually excute your step.\n"
    "After the call, you will get the call result, and you are now in a new state. Then you will "
    "analyze your status now, then decide what to do next.. After many (Thought-call) pairs, you "
    "finally perform the task, then you can give your finial answer.\n"
    "Remember: 1.the state change is irreversible, you can't go back to one of the former state, "
    "if you want to restart the task, say \"I give up and restart\".\n"
    "2.All the thought is short, at most in 5 sentence.\n"
    "3.You can do more then one trys, so if your plan is to continusly try some conditions, you "
    "can do one of the conditions per try.\n"
    "Let's Begin!\n"
    "Task description: You should use functions to help handle the real time user querys. "
    "Remember:\n"
    "1.ALWAYS call \"Finish\" function at the end of the task. And the final answer should "
    "contain enough information to show to the user,If you can't handle the task, or you find "
    "that function calls always fail(the function is not valid now), use function "
    "Finish->give_up_and_restart.\n"
    "2.Do not use origin tool names, use only subfunctions' names. You have access of the "
    "following tools:";

const std::string_view kCheckAnswerStatus =
    "Giving the query and answer, you need give `answer_status` of the answer by following "
    "rules:\n"
    "1. If the answer is a sorry message or not a positive/straight response for the given query, "
    "return \"Unsolved\".\n"
    "2. If the answer is a positive/straight response for the given query, you have to further "
    "check.\n"
    "2.1 If the answer is not sufficient to determine whether the solve the query or not, return "
    "\"Unsure\".\n"
    "2.2 If you are confident that the answer is sufficient to determine whether the solve the "
    "query or not, return \"Solved\" or \"Unsolved\".\n"
    "\n"
    "Query:\n"
    "{query}\n"
    "Answer:\n"
    "{answer}\n"
    "\n"
    "Now give your reason in \"content\" and `answer_status` of JSON to `check_answer_status`.";

const std::string_view kParseAnswerStatus =
    "Giving the query and the correspond execution detail of an answer, you need give "
    "`answer_status` of the answer by following rules:\n"
    "1. If all 'tool' nodes' message indicate that there are errors happened, return "
    "\"Unsolved\"\n"
    "2. If you find the information in the \"final_answer\" is not true/valid according to the "
    "messages in 'tool' nodes, return \"Unsolved\"\n"
    "3. If you are unable to verify the authenticity and validity of the information, return "
    "\"Unsure\"\n"
    "4. If there are 'tool' node in the chain contains successful func calling and those calling "
    "indeed solve the query, return \"Solved\"\n"
    "\n"
    "Query:\n"
    "{query}\n"
    "Answer:\n"
    "{answer}\n"
    "\n"
    "Now you are requested to give reason in \"content\" and `answer_status` of JSON to "
    "`parse_answer_status`.";

const std::string_view kCheckTaskSolvable =
    "Please check whether the given task solvable with following rules:\n"
    "1. If the `query` provide invalid information (e.g. invalid email address or phone number), "
    "return \"Unsolvable\"\n"
    "2. If the `query` needs more information to solve (e.g. the target restaurant name in a "
    "navigation task), return \"Unsolvable\"\n"
    "3. If you are unable to draw a conclusion, return \"Unsure\"\n"
    "4. If the currently `available_tools` are enough to solve the query, return \"Solvable\"\n"
    "\n"
    "Task:\n"
    "{task}\n"
    "\n"
    "Now give your reason in \"content\" and `task_status` of JSON to `check_task_solvable`.";

const std::string_view kFinishObservation =
    R"({"error":"","response":"successfully giving the final answer."})";
const std::string_view kGiveUpObservation =
    R"({"error":"","response":"giving up; the task will restart from an earlier state."})";

const std::string_view kNoAnswerMarker = "[no final answer: the agent gave up or ran out of steps]";

std::string fill(std::string_view tmpl, std::string_view key, std::string_view value) {
  const std::string needle = "{" + std::string(key) + "}";
  std::string out(tmpl);
  std::size_t pos = 0;
  while ((pos = out.find(needle, pos)) != std::string::npos) {
    out.replace(pos, needle.size(), value);
    pos += value.size();
  }
  return out;
}

}  // namespace ecoact::prompts
