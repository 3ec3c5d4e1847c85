JNIEXPORT void JNICALL Java_Gate_nativeRun(JNIEnv *env, jclass cls, jobject data) {
    Frame *frame = env->GetDirectBufferAddress(data);
    char *src = frame->bytes;
    char out[32];
    if (sizeof(out) > 1) {
        strcpy(out, src);
    }
}
