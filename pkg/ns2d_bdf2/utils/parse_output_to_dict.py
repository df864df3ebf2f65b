import os
import textfsm


def numbered_lines(text):
    """Prefix every line with its 1-based number, ``"<n>:<line>"``."""
    return "".join("{}:{}\n".format(number, line) for number, line in enumerate(text.splitlines(), 1))


def parse_with_textfsm(template, text):
    """
    :param template: TextFSM template, relative to this directory
    :param text: text to tokenise
    :return: List of dicts. Dict per FSM row.
    """
    with open(os.path.join(os.path.dirname(os.path.realpath(__file__)), template), "r") as template_file:
        fsm = textfsm.TextFSM(template_file)
        fsm_results = fsm.ParseText(text)
    output_list = []
    for line in fsm_results:
        output_list.append(dict(zip(fsm.header, line)))
    return output_list


def parse_with_textfsm_by_first_value(template, text):
    """
    :param template: TextFSM template, relative to this directory
    :param text: text to tokenise
    :return: Dict per first(top) textFSM template value
    """
    with open(os.path.join(os.path.dirname(os.path.realpath(__file__)), template), "r") as template_file:
        fsm = textfsm.TextFSM(template_file)
        fsm_results = fsm.ParseText(text)
    textfsm_dict = {}
    for line in fsm_results:
        textfsm_dict[line[0]] = {}
        for number, value in enumerate(line[1:], 1):
            textfsm_dict[line[0]][fsm.header[number]] = value
    return textfsm_dict
