"""
Grammar - Concrete syntax of .lsp programs
==========================================

One program per file: optional ``base`` / ``const`` headers, type aliases,
process macros, an optional default typing context and exactly one
``main`` process. Semicolons after declarations are optional and ``--``
starts a comment.

    base product, ccard, nat;
    const p : product, c : ccard;
    type Ts = lin !p:product. lin !c:ccard. lin !a:{x:nat | charge(c,x)}. end;
    def Client = s1!`p`. s1!`c`. s1!100. 0;
    main = new s1 s2 : Ts (Client | Store)

``|`` binds loosest and prefixes extend as far right as possible.
"""

from functools import lru_cache

from lark import Lark


GRAMMAR = r"""
program: item*

?item: base_decl
     | const_decl
     | type_decl
     | def_decl
     | context_decl
     | main_decl

base_decl: "base" NAME ("," NAME)* ";"?
const_decl: "const" const_item ("," const_item)* ";"?
const_item: NAME ":" NAME
type_decl: "type" NAME "=" type ";"?
def_decl: "def" NAME params "=" process ";"?
params: ("(" [NAME ("," NAME)*] ")")?
context_decl: "context" entries? ";"?
main_decl: "main" "=" process ";"?

context_file: "context"? entries? ";"?
entries: entry ("," entry)*
?entry: binding
      | formula
binding: NAME ":" type

// ---- processes ----------------------------------------------------------

?process: prefix
        | process "|" prefix                         -> par

?prefix: NAME "!" value "." prefix                   -> send
       | NAME "?" NAME "." prefix                    -> receive
       | "*" prefix                                  -> repl
       | "0"                                         -> inact
       | "new" NAME NAME ":" type ["," type] prefix  -> restrict
       | "(" "assume" formula ")" prefix             -> assume
       | "assert" formula "." prefix                 -> assert_
       | "(" process ")"
       | NAME "(" [value ("," value)*] ")"           -> call
       | NAME                                        -> call

// ---- types --------------------------------------------------------------

?type: atype
     | qual "!" NAME ":" atype "." type              -> out_named
     | qual "!" atype "." type                       -> out_anon
     | qual "?" NAME ":" atype "." type              -> in_named
     | qual "?" atype "." type                       -> in_anon
     | "rec" NAME "." type                           -> rec

!qual: "lin" | "un"

?atype: "unit"                                       -> unit_type
      | "end"                                        -> end_type
      | NAME                                         -> type_ref
      | "{" NAME ":" type "|" formula "}"            -> refined
      | "(" type ")"

// ---- formulae and values ------------------------------------------------

?formula: fatom
        | formula "*" fatom                          -> tensor

?fatom: "1"                                          -> one
      | NAME "(" [value ("," value)*] ")"            -> atom
      | NAME                                         -> atom
      | "(" formula ")"

?value: vatom
      | value "+" vatom                              -> sum

?vatom: NAME                                         -> var
      | INT                                          -> nat_lit
      | LITERAL                                      -> base_lit
      | "(" ")"                                      -> unit_value
      | "(" value ")"

NAME: /[A-Za-z_][A-Za-z0-9_']*/
LITERAL: /`[A-Za-z_][A-Za-z0-9_']*(:[A-Za-z_][A-Za-z0-9_']*)?`/
COMMENT: /--[^\n]*/

%import common.INT
%import common.WS
%ignore WS
%ignore COMMENT
"""


@lru_cache(maxsize=1)
def get_parser() -> Lark:
    """The shared LALR parser (built once; Lark parsers are reusable)."""
    return Lark(
        GRAMMAR,
        parser="lalr",
        start=["program", "context_file"],
        propagate_positions=True,
        maybe_placeholders=True,
    )
