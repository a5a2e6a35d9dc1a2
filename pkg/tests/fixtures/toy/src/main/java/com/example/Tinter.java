package com.example;

/** Exit bookkeeping that funnels every return through one finally block. */
public class Tinter {

    public int fp;

    private Tinter tinter;

    /** Links the frame bookkeeping to a peer. */
    public void wire(Tinter other) {
        this.tinter = other;
    }

    /** Pops one frame no matter how the dispatch exits. */
    public int dispatch(int op) {
        try {
            if (op == 0) {
                return 0;
            }
            if (op == 1) {
                return 1;
            }
            if (op == 2) {
                return 2;
            }
            if (op == 3) {
                return 3;
            }
            return op;
        } finally {
            fp = tinter.fp - 1;
        }
    }
}
