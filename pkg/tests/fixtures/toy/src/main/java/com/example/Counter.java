package com.example;

/** Cursor stepping fixture. */
public class Counter {

    /** Advances the cursor by one slot. */
    public int next(int cursor) {
        cursor++;
        return cursor;
    }

    public int back(int cursor) {
        cursor--;
        return cursor;
    }

    public int skip(int cursor) {
        cursor += 2;
        return cursor;
    }

    /** Mirrors a delta around zero. */
    public int invert(int delta) {
        return -delta;
    }
}
